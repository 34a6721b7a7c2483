use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::C64;

/// Integrability exponent in `[1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            Ok(Exponent::Infinite)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::InvalidParams(format!("exponent {p} outside [1, inf]")))
        }
    }

    /// `1/p`, zero at infinity.
    pub fn inv(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinite => 0.0,
        }
    }

    /// `1/p'` where `1/p + 1/p' = 1`.
    pub fn conj_inv(self) -> f64 {
        1.0 - self.inv()
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(p) => Some(p),
            Exponent::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    /// Exponent applied to norms when forming power quotients; 1 at infinity.
    pub fn power(self) -> f64 {
        self.finite().unwrap_or(1.0)
    }

    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    pub fn is_two(self) -> bool {
        self == Exponent::Finite(2.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞") {
            return Ok(Exponent::Infinite);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::InvalidParams(format!("cannot parse exponent '{s}'")))?;
        Exponent::new(p)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => ser.serialize_f64(*p),
            Exponent::Infinite => ser.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Domain {
    WholeSpace,
    HalfSpace,
    OneDimHalfLine,
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "whole" | "wholespace" | "whole-space" => Ok(Domain::WholeSpace),
            "half" | "halfspace" | "half-space" => Ok(Domain::HalfSpace),
            "halfline" | "half-line" | "line" => Ok(Domain::OneDimHalfLine),
            other => Err(Error::InvalidParams(format!("unknown domain '{other}'"))),
        }
    }
}

/// Spherical-harmonic orders retained in the function space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ModeSet {
    All,
    /// Sorted, without duplicates.
    Finite(Vec<u32>),
}

impl ModeSet {
    pub fn finite(mut orders: Vec<u32>) -> Self {
        orders.sort_unstable();
        orders.dedup();
        ModeSet::Finite(orders)
    }

    pub fn single(n: u32) -> Self {
        ModeSet::Finite(vec![n])
    }
}

impl FromStr for ModeSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("all") {
            return Ok(ModeSet::All);
        }
        let orders = t
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidParams(format!("bad mode '{x}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        if orders.is_empty() {
            return Err(Error::InvalidParams("empty mode set".into()));
        }
        Ok(ModeSet::finite(orders))
    }
}

/// The tuple `(N, p, α, b, c, domain, J)` fixing one inequality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProblemParams {
    #[serde(rename = "N")]
    pub dim: u32,
    pub p: Exponent,
    pub alpha: f64,
    #[serde(serialize_with = "ser_complex")]
    pub b: C64,
    #[serde(serialize_with = "ser_complex")]
    pub c: C64,
    pub domain: Domain,
    pub modes: ModeSet,
}

fn ser_complex<S: Serializer>(z: &C64, ser: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(ser)
}

impl ProblemParams {
    /// Whole space, all modes, `b = c = 0`.
    pub fn new(dim: u32, p: Exponent, alpha: f64) -> Self {
        ProblemParams {
            dim,
            p,
            alpha,
            b: C64::new(0.0, 0.0),
            c: C64::new(0.0, 0.0),
            domain: Domain::WholeSpace,
            modes: ModeSet::All,
        }
    }

    pub fn with_b(mut self, b: C64) -> Self {
        self.b = b;
        self
    }

    pub fn with_c(mut self, c: C64) -> Self {
        self.c = c;
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_modes(mut self, modes: ModeSet) -> Self {
        self.modes = modes;
        self
    }

    pub fn n(&self) -> f64 {
        self.dim as f64
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.b.im == 0.0 && self.c.im == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::InvalidParams("dimension must be at least 1".into()));
        }
        if let Exponent::Finite(p) = self.p {
            if !(p >= 1.0 && p.is_finite()) {
                return Err(Error::InvalidParams(format!("exponent {p} outside [1, inf]")));
            }
        }
        if !self.alpha.is_finite() || !self.b.is_finite() || !self.c.is_finite() {
            return Err(Error::InvalidParams("non-finite coefficient".into()));
        }
        match self.domain {
            Domain::OneDimHalfLine => {
                if self.dim != 1 {
                    return Err(Error::InvalidParams("half-line problems require N = 1".into()));
                }
                if let ModeSet::Finite(j) = &self.modes {
                    if j.as_slice() != [0] {
                        return Err(Error::InvalidParams("half-line problems carry the single mode 0".into()));
                    }
                }
            }
            Domain::HalfSpace => {
                if self.dim < 2 {
                    return Err(Error::InvalidParams("half-space problems require N >= 2".into()));
                }
                if let ModeSet::Finite(j) = &self.modes {
                    if j.contains(&0) {
                        return Err(Error::InvalidParams("mode 0 has no Dirichlet eigenfunction on the half-sphere".into()));
                    }
                }
            }
            Domain::WholeSpace => {
                if self.dim < 2 {
                    return Err(Error::InvalidParams("N = 1 is the half-line domain".into()));
                }
            }
        }
        if let ModeSet::Finite(j) = &self.modes {
            if j.is_empty() {
                return Err(Error::InvalidParams("empty mode set".into()));
            }
        }
        Ok(())
    }
}
