//! Mean-zero base distributions for the coordinates of generated
//! observations, with their exact raw moments.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coordinate law. Chi-square is centered (`chi2_nu - nu`);
/// `StandardizedStudentT` is Student t rescaled to unit variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum BaseDist {
    StandardNormal,
    StudentT(u32),
    StandardizedStudentT(u32),
    CenteredChiSquare(u32),
}

/// Raw moments `(E x^2, E x^3, E x^4)` of a mean-zero variate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawMoments {
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
}

impl RawMoments {
    pub fn new(m2: f64, m3: f64, m4: f64) -> Result<Self> {
        let m = RawMoments { m2, m3, m4 };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m2.is_finite() && self.m2 > 0.0) {
            return Err(Error::invalid(format!(
                "second moment must be positive, got {}",
                self.m2
            )));
        }
        if !self.m3.is_finite() || !self.m4.is_finite() {
            return Err(Error::invalid("moments must be finite"));
        }
        // Cauchy-Schwarz, with slack for rounding.
        if self.m4 < self.m2 * self.m2 * (1.0 - 1e-12) {
            return Err(Error::invalid(format!(
                "fourth moment {} below squared second moment {}",
                self.m4,
                self.m2 * self.m2
            )));
        }
        Ok(())
    }
}

impl BaseDist {
    pub fn validate(&self) -> Result<()> {
        match *self {
            BaseDist::StandardNormal => Ok(()),
            BaseDist::StudentT(nu) | BaseDist::StandardizedStudentT(nu) if nu <= 4 => {
                Err(Error::InfiniteMoment(self.to_string()))
            }
            BaseDist::StudentT(_) | BaseDist::StandardizedStudentT(_) => Ok(()),
            BaseDist::CenteredChiSquare(0) => Err(Error::invalid(
                "chi-square needs at least one degree of freedom",
            )),
            BaseDist::CenteredChiSquare(_) => Ok(()),
        }
    }

    /// Exact raw moments of the (mean-zero) variate.
    pub fn moments(&self) -> Result<RawMoments> {
        self.validate()?;
        Ok(match *self {
            BaseDist::StandardNormal => RawMoments {
                m2: 1.0,
                m3: 0.0,
                m4: 3.0,
            },
            BaseDist::StudentT(nu) => {
                let nu = f64::from(nu);
                RawMoments {
                    m2: nu / (nu - 2.0),
                    m3: 0.0,
                    m4: 3.0 * nu * nu / ((nu - 2.0) * (nu - 4.0)),
                }
            }
            BaseDist::StandardizedStudentT(nu) => {
                let nu = f64::from(nu);
                RawMoments {
                    m2: 1.0,
                    m3: 0.0,
                    m4: 3.0 * (nu - 2.0) / (nu - 4.0),
                }
            }
            BaseDist::CenteredChiSquare(nu) => {
                let nu = f64::from(nu);
                RawMoments {
                    m2: 2.0 * nu,
                    m3: 8.0 * nu,
                    m4: 12.0 * nu * (nu + 4.0),
                }
            }
        })
    }

    /// One draw. Student t is `z / sqrt(chi2_nu / nu)`; chi-square is a sum
    /// of squared standard normals.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            BaseDist::StandardNormal => rng.sample(StandardNormal),
            BaseDist::StudentT(nu) => {
                let z: f64 = rng.sample(StandardNormal);
                let chi2 = sum_sq_normals(rng, nu);
                z / (chi2 / f64::from(nu)).sqrt()
            }
            BaseDist::StandardizedStudentT(nu) => {
                let scale = (f64::from(nu - 2) / f64::from(nu)).sqrt();
                BaseDist::StudentT(nu).sample(rng) * scale
            }
            BaseDist::CenteredChiSquare(nu) => sum_sq_normals(rng, nu) - f64::from(nu),
        }
    }

    pub fn fill<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        for v in out {
            *v = self.sample(rng);
        }
    }
}

fn sum_sq_normals<R: Rng + ?Sized>(rng: &mut R, nu: u32) -> f64 {
    (0..nu)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            z * z
        })
        .sum()
}

impl fmt::Display for BaseDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseDist::StandardNormal => write!(f, "normal"),
            BaseDist::StudentT(nu) => write!(f, "t{nu}"),
            BaseDist::StandardizedStudentT(nu) => write!(f, "t{nu}-unit"),
            BaseDist::CenteredChiSquare(nu) => write!(f, "chisq{nu}"),
        }
    }
}

impl FromStr for BaseDist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let parse_nu = |rest: &str| {
            rest.trim_matches(|c| c == '(' || c == ')' || c == '_')
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad degrees of freedom in {s:?}")))
        };
        let dist = if s == "normal" || s == "n(0,1)" || s == "standard-normal" {
            BaseDist::StandardNormal
        } else if let Some(rest) = s.strip_prefix("chisq") {
            BaseDist::CenteredChiSquare(parse_nu(rest)?)
        } else if let Some(rest) = s.strip_suffix("-unit").and_then(|r| r.strip_prefix('t')) {
            BaseDist::StandardizedStudentT(parse_nu(rest)?)
        } else if let Some(rest) = s.strip_prefix("student-t") {
            BaseDist::StudentT(parse_nu(rest)?)
        } else if let Some(rest) = s.strip_prefix('t') {
            BaseDist::StudentT(parse_nu(rest)?)
        } else {
            return Err(Error::Parse(format!("unknown distribution {s:?}")));
        };
        Ok(dist)
    }
}

impl TryFrom<String> for BaseDist {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BaseDist> for String {
    fn from(d: BaseDist) -> String {
        d.to_string()
    }
}
