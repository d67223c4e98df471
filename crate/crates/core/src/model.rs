//! Physical model description and its text format.
//!
//! ```text
//! chain {
//!     gravity = 9.81
//!     link { mass = 1.0 free(0.1, 10), length = 1.0, com = 0.5, inertia_zz = 0.08, damping = 0.0 }
//!     link { mass = 0.5, length = 0.8 }
//! }
//! ```
//!
//! or
//!
//! ```text
//! free_body { mass = 1.0, inertia = [0.0017, 0.0017, 0.0017], half_extents = [0.05, 0.05, 0.05] }
//! contact { stiffness = 1e5 free(10, 1e7), damping = 1.0, mu0 = 0.5, eps_v = 1e-3 }
//! target_contact { mu = 0.5, beta = 0.2, iterations = 32 }
//! ```
//!
//! Any numeric field may be followed by `free(min, max)`, which makes it an
//! entry of the analytical parameter vector. A link without `com` keeps its
//! centre of mass at the link tip, tracking `length`. `inertia_zz` is taken
//! about the link's centre of mass.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::text::Cursor;

pub const DEFAULT_GRAVITY: f64 = 9.81;

/// A model quantity; `bounds` marks it as a free parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Param {
    pub value: f64,
    pub bounds: Option<(f64, f64)>,
}

impl Param {
    pub fn fixed(value: f64) -> Self {
        Param { value, bounds: None }
    }

    pub fn free(value: f64, min: f64, max: f64) -> Self {
        Param {
            value,
            bounds: Some((min, max)),
        }
    }

    pub fn is_free(&self) -> bool {
        self.bounds.is_some()
    }

    pub fn with_bounds(mut self, min: f64, max: f64) -> Self {
        self.bounds = Some((min, max));
        self
    }
}

impl From<f64> for Param {
    fn from(value: f64) -> Self {
        Param::fixed(value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub mass: Param,
    pub length: Param,
    /// Distance from the joint to the centre of mass along the link; `None`
    /// places it at the tip.
    pub com: Option<Param>,
    pub inertia: Param,
    pub damping: Param,
}

impl Link {
    /// Point mass at the tip of a massless rod.
    pub fn point_mass(mass: f64, length: f64) -> Self {
        Link {
            mass: mass.into(),
            length: length.into(),
            com: None,
            inertia: 0.0.into(),
            damping: 0.0.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainModel {
    pub links: Vec<Link>,
    pub gravity: Param,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeBodyModel {
    pub mass: Param,
    /// Principal moments about the body axes.
    pub inertia: [Param; 3],
    pub half_extents: [Param; 3],
    pub gravity: Param,
}

impl FreeBodyModel {
    /// Uniform-density box.
    pub fn cube(mass: f64, half_extent: f64) -> Self {
        let i = mass * (2.0 * half_extent).powi(2) / 6.0;
        FreeBodyModel {
            mass: mass.into(),
            inertia: [i.into(); 3],
            half_extents: [half_extent.into(); 3],
            gravity: DEFAULT_GRAVITY.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactParams {
    /// Hunt-Crossley stiffness, N/m^1.5.
    pub stiffness: Param,
    /// Hunt-Crossley damping, s/m.
    pub damping: Param,
    /// Coulomb coefficient of the analytical friction term.
    pub mu0: Param,
    /// Velocity smoothing of the analytical friction term, m/s.
    pub eps_v: Param,
    pub ground_height: f64,
    /// Route friction through the `contact_friction` attachment point; the
    /// blueprint must then provide it.
    pub neural_friction: bool,
}

impl Default for ContactParams {
    fn default() -> Self {
        ContactParams {
            stiffness: 1e5.into(),
            damping: 1.0.into(),
            mu0: 0.5.into(),
            eps_v: 1e-3.into(),
            ground_height: 0.0,
            neural_friction: false,
        }
    }
}

/// Settings of the complementarity-style target stepper. Not differentiable,
/// never free.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PgsParams {
    pub mu: f64,
    pub beta: f64,
    pub iterations: usize,
}

impl Default for PgsParams {
    fn default() -> Self {
        PgsParams {
            mu: 0.5,
            beta: 0.2,
            iterations: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Body {
    Chain(ChainModel),
    FreeBody(FreeBodyModel),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiBodyModel {
    pub body: Body,
    pub contact: Option<ContactParams>,
    pub pgs: PgsParams,
}

/// Scalar-typed instantiation of a [`MultiBodyModel`], with free parameters
/// taken from an external vector.
#[derive(Debug, Clone)]
pub struct LinkScalars<S> {
    pub mass: S,
    pub length: S,
    pub com: S,
    pub inertia: S,
    pub damping: S,
}

#[derive(Debug, Clone)]
pub struct ChainScalars<S> {
    pub links: Vec<LinkScalars<S>>,
    pub gravity: S,
}

#[derive(Debug, Clone)]
pub struct FreeBodyScalars<S> {
    pub mass: S,
    pub inertia: [S; 3],
    pub half_extents: [S; 3],
    pub gravity: S,
}

#[derive(Debug, Clone)]
pub struct ContactScalars<S> {
    pub stiffness: S,
    pub damping: S,
    pub mu0: S,
    pub eps_v: S,
    pub ground_height: f64,
    pub neural_friction: bool,
}

#[derive(Debug, Clone)]
pub enum BodyScalars<S> {
    Chain(ChainScalars<S>),
    FreeBody(FreeBodyScalars<S>),
}

#[derive(Debug, Clone)]
pub struct ModelScalars<S> {
    pub body: BodyScalars<S>,
    pub contact: Option<ContactScalars<S>>,
}

impl<S: Scalar> ModelScalars<S> {
    pub fn dof(&self) -> usize {
        match &self.body {
            BodyScalars::Chain(c) => c.links.len(),
            BodyScalars::FreeBody(_) => 6,
        }
    }

    pub fn q_dim(&self) -> usize {
        match &self.body {
            BodyScalars::Chain(c) => c.links.len(),
            BodyScalars::FreeBody(_) => 7,
        }
    }

    pub fn is_chain(&self) -> bool {
        matches!(self.body, BodyScalars::Chain(_))
    }
}

/// Which physical quantity a parameter is, for bound guards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Mass,
    Length,
    Inertia,
    Other,
}

impl MultiBodyModel {
    pub fn chain(links: Vec<Link>) -> Self {
        MultiBodyModel {
            body: Body::Chain(ChainModel {
                links,
                gravity: DEFAULT_GRAVITY.into(),
            }),
            contact: None,
            pgs: PgsParams::default(),
        }
    }

    pub fn free_body(body: FreeBodyModel, contact: Option<ContactParams>) -> Self {
        MultiBodyModel {
            body: Body::FreeBody(body),
            contact,
            pgs: PgsParams::default(),
        }
    }

    /// Generalized position dimension.
    pub fn q_dim(&self) -> usize {
        match &self.body {
            Body::Chain(c) => c.links.len(),
            Body::FreeBody(_) => 7,
        }
    }

    /// Generalized velocity dimension (degrees of freedom).
    pub fn dof(&self) -> usize {
        match &self.body {
            Body::Chain(c) => c.links.len(),
            Body::FreeBody(_) => 6,
        }
    }

    pub fn is_chain(&self) -> bool {
        matches!(self.body, Body::Chain(_))
    }

    /// Every parameter in canonical order with its dotted name.
    pub fn params(&self) -> Vec<(String, ParamKind, &Param)> {
        let mut out = Vec::new();
        match &self.body {
            Body::Chain(c) => {
                for (i, l) in c.links.iter().enumerate() {
                    out.push((format!("link{i}.mass"), ParamKind::Mass, &l.mass));
                    out.push((format!("link{i}.length"), ParamKind::Length, &l.length));
                    if let Some(com) = &l.com {
                        out.push((format!("link{i}.com"), ParamKind::Length, com));
                    }
                    out.push((format!("link{i}.inertia_zz"), ParamKind::Inertia, &l.inertia));
                    out.push((format!("link{i}.damping"), ParamKind::Other, &l.damping));
                }
                out.push(("gravity".into(), ParamKind::Other, &c.gravity));
            }
            Body::FreeBody(b) => {
                out.push(("free_body.mass".into(), ParamKind::Mass, &b.mass));
                for (i, p) in b.inertia.iter().enumerate() {
                    out.push((format!("free_body.inertia[{i}]"), ParamKind::Inertia, p));
                }
                for (i, p) in b.half_extents.iter().enumerate() {
                    out.push((format!("free_body.half_extents[{i}]"), ParamKind::Length, p));
                }
                out.push(("gravity".into(), ParamKind::Other, &b.gravity));
            }
        }
        if let Some(c) = &self.contact {
            out.push(("contact.stiffness".into(), ParamKind::Other, &c.stiffness));
            out.push(("contact.damping".into(), ParamKind::Other, &c.damping));
            out.push(("contact.mu0".into(), ParamKind::Other, &c.mu0));
            out.push(("contact.eps_v".into(), ParamKind::Other, &c.eps_v));
        }
        out
    }

    fn params_mut(&mut self) -> Vec<&mut Param> {
        let mut out: Vec<&mut Param> = Vec::new();
        match &mut self.body {
            Body::Chain(c) => {
                for l in &mut c.links {
                    out.push(&mut l.mass);
                    out.push(&mut l.length);
                    if let Some(com) = &mut l.com {
                        out.push(com);
                    }
                    out.push(&mut l.inertia);
                    out.push(&mut l.damping);
                }
                out.push(&mut c.gravity);
            }
            Body::FreeBody(b) => {
                out.push(&mut b.mass);
                out.extend(b.inertia.iter_mut());
                out.extend(b.half_extents.iter_mut());
                out.push(&mut b.gravity);
            }
        }
        if let Some(c) = &mut self.contact {
            out.push(&mut c.stiffness);
            out.push(&mut c.damping);
            out.push(&mut c.mu0);
            out.push(&mut c.eps_v);
        }
        out
    }

    /// Free parameters: name, kind, current value, bounds.
    pub fn free_params(&self) -> Vec<(String, ParamKind, f64, (f64, f64))> {
        self.params()
            .into_iter()
            .filter_map(|(n, k, p)| p.bounds.map(|b| (n, k, p.value, b)))
            .collect()
    }

    pub fn num_free(&self) -> usize {
        self.params().iter().filter(|(_, _, p)| p.is_free()).count()
    }

    pub fn free_values(&self) -> Vec<f64> {
        self.free_params().into_iter().map(|(_, _, v, _)| v).collect()
    }

    /// Writes new values into the free parameters, in canonical order.
    pub fn set_free_values(&mut self, values: &[f64]) -> Result<()> {
        let n = self.num_free();
        if values.len() != n {
            return Err(Error::Dimension(format!(
                "model has {n} free parameters, got {}",
                values.len()
            )));
        }
        let mut it = values.iter();
        for p in self.params_mut() {
            if p.is_free() {
                p.value = *it.next().expect("counted");
            }
        }
        Ok(())
    }

    /// Scales every parameter value by `factor` (used for mis-scaled starts).
    pub fn scale_free_values(&mut self, factor: f64) {
        for p in self.params_mut() {
            if p.is_free() {
                p.value *= factor;
            }
        }
    }

    /// Instantiates the model over scalar type `S`; free parameters come from
    /// `free` in canonical order, everything else is lifted as a constant.
    pub fn instantiate<S: Scalar>(&self, free: &[S]) -> Result<ModelScalars<S>> {
        let n = self.num_free();
        if free.len() != n {
            return Err(Error::Dimension(format!(
                "model has {n} free parameters, got {}",
                free.len()
            )));
        }
        let mut it = free.iter();
        let mut take = |p: &Param| -> S {
            if p.is_free() {
                it.next().expect("counted").clone()
            } else {
                S::from_f64(p.value)
            }
        };
        let body = match &self.body {
            Body::Chain(c) => {
                let mut links = Vec::with_capacity(c.links.len());
                for l in &c.links {
                    let mass = take(&l.mass);
                    let length = take(&l.length);
                    let com = match &l.com {
                        Some(p) => take(p),
                        None => length.clone(),
                    };
                    let inertia = take(&l.inertia);
                    let damping = take(&l.damping);
                    links.push(LinkScalars {
                        mass,
                        length,
                        com,
                        inertia,
                        damping,
                    });
                }
                let gravity = take(&c.gravity);
                BodyScalars::Chain(ChainScalars { links, gravity })
            }
            Body::FreeBody(b) => {
                let mass = take(&b.mass);
                let inertia = [take(&b.inertia[0]), take(&b.inertia[1]), take(&b.inertia[2])];
                let half_extents = [
                    take(&b.half_extents[0]),
                    take(&b.half_extents[1]),
                    take(&b.half_extents[2]),
                ];
                let gravity = take(&b.gravity);
                BodyScalars::FreeBody(FreeBodyScalars {
                    mass,
                    inertia,
                    half_extents,
                    gravity,
                })
            }
        };
        let contact = self.contact.as_ref().map(|c| ContactScalars {
            stiffness: take(&c.stiffness),
            damping: take(&c.damping),
            mu0: take(&c.mu0),
            eps_v: take(&c.eps_v),
            ground_height: c.ground_height,
            neural_friction: c.neural_friction,
        });
        Ok(ModelScalars { body, contact })
    }

    /// Plain-number instantiation using the current values.
    pub fn nominal(&self) -> ModelScalars<f64> {
        self.instantiate(&self.free_values()).expect("own free values")
    }

    pub fn validate(&self) -> Result<()> {
        for (name, kind, p) in self.params() {
            if !p.value.is_finite() {
                return Err(Error::InvalidModel(format!("{name} is not finite")));
            }
            let ok = match kind {
                ParamKind::Mass | ParamKind::Length => p.value > 0.0,
                ParamKind::Inertia => {
                    if self.is_chain() {
                        p.value >= 0.0
                    } else {
                        p.value > 0.0
                    }
                }
                ParamKind::Other => true,
            };
            if !ok {
                return Err(Error::InvalidModel(format!(
                    "{name} = {} must be positive",
                    p.value
                )));
            }
            if let Some((lo, hi)) = p.bounds {
                if !(lo <= hi) || p.value < lo || p.value > hi {
                    return Err(Error::InvalidModel(format!(
                        "{name} = {} lies outside free({lo}, {hi})",
                        p.value
                    )));
                }
            }
        }
        if let Body::Chain(c) = &self.body {
            if c.links.is_empty() {
                return Err(Error::InvalidModel("chain has no links".into()));
            }
            for (i, l) in c.links.iter().enumerate() {
                if l.damping.value < 0.0 {
                    return Err(Error::InvalidModel(format!("link{i}.damping is negative")));
                }
            }
        }
        if let Some(c) = &self.contact {
            if c.stiffness.value <= 0.0 {
                return Err(Error::InvalidModel("contact.stiffness must be positive".into()));
            }
            if c.damping.value < 0.0 || c.mu0.value < 0.0 {
                return Err(Error::InvalidModel(
                    "contact.damping and contact.mu0 must be non-negative".into(),
                ));
            }
            if c.eps_v.value <= 0.0 {
                return Err(Error::InvalidModel("contact.eps_v must be positive".into()));
            }
        }
        if self.pgs.iterations == 0 || self.pgs.mu < 0.0 || !(0.0..=1.0).contains(&self.pgs.beta) {
            return Err(Error::InvalidModel("invalid target_contact settings".into()));
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_model(text)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match &self.body {
            Body::Chain(c) => {
                let _ = writeln!(s, "chain {{");
                let _ = writeln!(s, "    gravity = {}", fmt_param(&c.gravity));
                for l in &c.links {
                    let mut fields = vec![
                        format!("mass = {}", fmt_param(&l.mass)),
                        format!("length = {}", fmt_param(&l.length)),
                    ];
                    if let Some(com) = &l.com {
                        fields.push(format!("com = {}", fmt_param(com)));
                    }
                    fields.push(format!("inertia_zz = {}", fmt_param(&l.inertia)));
                    fields.push(format!("damping = {}", fmt_param(&l.damping)));
                    let _ = writeln!(s, "    link {{ {} }}", fields.join(", "));
                }
                let _ = writeln!(s, "}}");
            }
            Body::FreeBody(b) => {
                let _ = writeln!(s, "free_body {{");
                let _ = writeln!(s, "    mass = {}", fmt_param(&b.mass));
                let _ = writeln!(s, "    inertia = [{}]", fmt_params(&b.inertia));
                let _ = writeln!(s, "    half_extents = [{}]", fmt_params(&b.half_extents));
                let _ = writeln!(s, "    gravity = {}", fmt_param(&b.gravity));
                let _ = writeln!(s, "}}");
            }
        }
        if let Some(c) = &self.contact {
            let _ = writeln!(s, "contact {{");
            let _ = writeln!(s, "    stiffness = {}", fmt_param(&c.stiffness));
            let _ = writeln!(s, "    damping = {}", fmt_param(&c.damping));
            let _ = writeln!(s, "    mu0 = {}", fmt_param(&c.mu0));
            let _ = writeln!(s, "    eps_v = {}", fmt_param(&c.eps_v));
            let _ = writeln!(s, "    ground = {:?}", c.ground_height);
            let _ = writeln!(s, "    neural_friction = {}", c.neural_friction);
            let _ = writeln!(s, "}}");
        }
        if self.pgs != PgsParams::default() {
            let p = &self.pgs;
            let _ = writeln!(
                s,
                "target_contact {{ mu = {:?}, beta = {:?}, iterations = {} }}",
                p.mu, p.beta, p.iterations
            );
        }
        s
    }
}

fn fmt_param(p: &Param) -> String {
    match p.bounds {
        Some((lo, hi)) => format!("{:?} free({:?}, {:?})", p.value, lo, hi),
        None => format!("{:?}", p.value),
    }
}

fn fmt_params(ps: &[Param]) -> String {
    ps.iter().map(fmt_param).collect::<Vec<_>>().join(", ")
}

fn param(c: &mut Cursor) -> Result<Param> {
    let value = c.number()?;
    if c.is_ident("free") {
        c.ident()?;
        c.expect_punct('(')?;
        let lo = c.number()?;
        c.expect_punct(',')?;
        let hi = c.number()?;
        c.expect_punct(')')?;
        Ok(Param::free(value, lo, hi))
    } else {
        Ok(Param::fixed(value))
    }
}

fn param3(c: &mut Cursor, key: &str) -> Result<[Param; 3]> {
    let (l, col) = c.here();
    let v = c.list(param)?;
    v.try_into()
        .map_err(|_| Error::parse(l, col, format!("`{key}` needs exactly 3 entries")))
}

/// Parses `{ key = value ... }`, dispatching each key to `entry`.
fn block(
    c: &mut Cursor,
    mut entry: impl FnMut(&mut Cursor, &str, usize, usize) -> Result<()>,
) -> Result<()> {
    c.expect_punct('{')?;
    let mut seen: Vec<String> = Vec::new();
    loop {
        c.skip_separators();
        if c.eat_punct('}') {
            return Ok(());
        }
        let (key, l, col) = c.ident()?;
        if key != "link" {
            if seen.contains(&key) {
                return Err(Error::parse(l, col, format!("duplicate key `{key}`")));
            }
            seen.push(key.clone());
            c.expect_punct('=')?;
        }
        entry(c, &key, l, col)?;
    }
}

fn required(p: Option<Param>, key: &str, l: usize, col: usize) -> Result<Param> {
    p.ok_or_else(|| Error::parse(l, col, format!("missing `{key}`")))
}

pub fn parse_model(text: &str) -> Result<MultiBodyModel> {
    let mut c = Cursor::new(text)?;
    let mut body: Option<Body> = None;
    let mut contact: Option<ContactParams> = None;
    let mut pgs = PgsParams::default();

    while !c.at_end() {
        let (kw, l, col) = c.ident()?;
        match kw.as_str() {
            "chain" | "free_body" if body.is_some() => {
                return Err(Error::parse(l, col, "only one body block is allowed"));
            }
            "chain" => {
                let mut links = Vec::new();
                let mut gravity = None;
                block(&mut c, |c, key, kl, kc| {
                    match key {
                        "gravity" => gravity = Some(param(c)?),
                        "link" => {
                            let (mut mass, mut length, mut com, mut inertia, mut damping) =
                                (None, None, None, None, None);
                            block(c, |c, key, il, ic| {
                                let slot = match key {
                                    "mass" => &mut mass,
                                    "length" => &mut length,
                                    "com" => &mut com,
                                    "inertia_zz" => &mut inertia,
                                    "damping" => &mut damping,
                                    _ => return Err(c_err(il, ic, key)),
                                };
                                *slot = Some(param(c)?);
                                Ok(())
                            })?;
                            links.push(Link {
                                mass: required(mass, "mass", kl, kc)?,
                                length: required(length, "length", kl, kc)?,
                                com,
                                inertia: inertia.unwrap_or(Param::fixed(0.0)),
                                damping: damping.unwrap_or(Param::fixed(0.0)),
                            });
                        }
                        _ => return Err(c_err(kl, kc, key)),
                    }
                    Ok(())
                })?;
                body = Some(Body::Chain(ChainModel {
                    links,
                    gravity: gravity.unwrap_or(Param::fixed(DEFAULT_GRAVITY)),
                }));
            }
            "free_body" => {
                let (mut mass, mut inertia, mut half, mut gravity) = (None, None, None, None);
                block(&mut c, |c, key, kl, kc| {
                    match key {
                        "mass" => mass = Some(param(c)?),
                        "inertia" => inertia = Some(param3(c, key)?),
                        "half_extents" => half = Some(param3(c, key)?),
                        "gravity" => gravity = Some(param(c)?),
                        _ => return Err(c_err(kl, kc, key)),
                    }
                    Ok(())
                })?;
                let miss = |k: &str| Error::parse(l, col, format!("free_body is missing `{k}`"));
                body = Some(Body::FreeBody(FreeBodyModel {
                    mass: mass.ok_or_else(|| miss("mass"))?,
                    inertia: inertia.ok_or_else(|| miss("inertia"))?,
                    half_extents: half.ok_or_else(|| miss("half_extents"))?,
                    gravity: gravity.unwrap_or(Param::fixed(DEFAULT_GRAVITY)),
                }));
            }
            "contact" => {
                let mut cp = ContactParams::default();
                block(&mut c, |c, key, kl, kc| {
                    match key {
                        "stiffness" => cp.stiffness = param(c)?,
                        "damping" => cp.damping = param(c)?,
                        "mu0" => cp.mu0 = param(c)?,
                        "eps_v" => cp.eps_v = param(c)?,
                        "ground" => cp.ground_height = c.number()?,
                        "neural_friction" => {
                            let (v, vl, vc) = c.ident()?;
                            cp.neural_friction = match v.as_str() {
                                "true" => true,
                                "false" => false,
                                _ => return Err(Error::parse(vl, vc, "expected true or false")),
                            };
                        }
                        _ => return Err(c_err(kl, kc, key)),
                    }
                    Ok(())
                })?;
                contact = Some(cp);
            }
            "target_contact" => {
                block(&mut c, |c, key, kl, kc| {
                    match key {
                        "mu" => pgs.mu = c.number()?,
                        "beta" => pgs.beta = c.number()?,
                        "iterations" => {
                            let v = c.number()?;
                            if v < 1.0 || v.fract() != 0.0 {
                                return Err(Error::parse(kl, kc, "iterations must be a positive integer"));
                            }
                            pgs.iterations = v as usize;
                        }
                        _ => return Err(c_err(kl, kc, key)),
                    }
                    Ok(())
                })?;
            }
            _ => return Err(Error::parse(l, col, format!("unknown block `{kw}`"))),
        }
    }
    let body = body.ok_or_else(|| Error::parse(1, 1, "model needs a `chain` or `free_body` block"))?;
    let model = MultiBodyModel { body, contact, pgs };
    model.validate()?;
    Ok(model)
}

fn c_err(l: usize, c: usize, key: &str) -> Error {
    Error::parse(l, c, format!("unknown key `{key}`"))
}
