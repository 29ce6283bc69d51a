//! JSON plane configurations and seeded random sampling.
//!
//! A configuration names its field and gives either `2n − 2` planes as pairs
//! of linear forms or, for `n = 3`, four lines as pairs of points:
//!
//! ```json
//! { "field": "Q", "n": 3,
//!   "lines": [ { "points": [[1, 0, 0, 0], [0, 0, 0, 1]] }, ... ] }
//! ```
//!
//! Coefficients are JSON integers or strings in the field's own syntax
//! (`"2/3"`, `"1+2*s"`, `"[1,4]"`).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::field::{AnyField, Field, FieldError, FiniteField, QuadExt, Quad, Rationals};
use crate::grassmann::{GeometryError, Line};
use crate::localindex::{CodimTwoPlane, IndexError, PlaneConfig};
use num_rational::BigRational;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("malformed configuration: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

impl Coeff {
    pub fn text(&self) -> String {
        match self {
            Coeff::Int(n) => n.to_string(),
            Coeff::Text(s) => s.clone(),
        }
    }

    fn from_text(s: String) -> Self {
        match s.parse::<i64>() {
            Ok(n) => Coeff::Int(n),
            Err(_) => Coeff::Text(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneDoc {
    pub alpha: Vec<Coeff>,
    pub beta: Vec<Coeff>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineDoc {
    pub points: [Vec<Coeff>; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub field: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub planes: Vec<PlaneDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lines: Vec<LineDoc>,
}

impl ConfigDoc {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn field(&self) -> Result<AnyField, ConfigError> {
        Ok(AnyField::parse(&self.field)?)
    }

    /// The typed configuration over `f`, which must match `self.field`.
    pub fn build<F: Field>(&self, f: &F) -> Result<Parsed<F>, ConfigError> {
        let parse = |v: &[Coeff]| -> Result<Vec<F::Elem>, ConfigError> {
            if v.len() != self.n + 1 {
                return Err(ConfigError::Invalid(format!("expected {} coordinates, got {}", self.n + 1, v.len())));
            }
            v.iter().map(|c| Ok(f.parse(&c.text())?)).collect()
        };
        match (self.planes.is_empty(), self.lines.is_empty()) {
            (false, true) => {
                let planes = self
                    .planes
                    .iter()
                    .map(|p| Ok(CodimTwoPlane::new(f, parse(&p.alpha)?, parse(&p.beta)?)?))
                    .collect::<Result<Vec<_>, ConfigError>>()?;
                let cfg = PlaneConfig::new(f, self.n, planes)?;
                let lines = if self.n == 3 {
                    let ls = cfg
                        .planes()
                        .iter()
                        .map(|p| {
                            let b = p.basis(f);
                            Line::new(f, b[0].clone(), b[1].clone())
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Some(ls)
                } else {
                    None
                };
                Ok(Parsed { planes: cfg, lines })
            }
            (true, false) => {
                if self.n != 3 {
                    return Err(ConfigError::Invalid("lines are only accepted for n = 3".into()));
                }
                let lines = self
                    .lines
                    .iter()
                    .map(|l| Ok(Line::new(f, parse(&l.points[0])?, parse(&l.points[1])?)?))
                    .collect::<Result<Vec<_>, ConfigError>>()?;
                let cfg = PlaneConfig::from_lines(&lines)?;
                Ok(Parsed { planes: cfg, lines: Some(lines) })
            }
            _ => Err(ConfigError::Invalid("give exactly one of \"planes\" or \"lines\"".into())),
        }
    }
}

/// A configuration with its lines when `n = 3`.
#[derive(Debug, Clone)]
pub struct Parsed<F: Field> {
    pub planes: PlaneConfig<F>,
    pub lines: Option<Vec<Line<F>>>,
}

/// Uniform sampling of field elements for random configurations.
pub trait Sample: Field {
    /// Integers in `[−bound, bound]` in characteristic 0, uniform otherwise.
    fn sample<R: Rng>(&self, rng: &mut R, bound: i64) -> Self::Elem;
}

impl Sample for Rationals {
    fn sample<R: Rng>(&self, rng: &mut R, bound: i64) -> BigRational {
        self.from_i64(rng.gen_range(-bound..=bound))
    }
}

impl Sample for FiniteField {
    fn sample<R: Rng>(&self, rng: &mut R, _bound: i64) -> u32 {
        rng.gen_range(0..self.q())
    }
}

impl Sample for QuadExt<Rationals> {
    fn sample<R: Rng>(&self, rng: &mut R, bound: i64) -> Quad<BigRational> {
        let u = Rationals.sample(rng, bound);
        let v = Rationals.sample(rng, bound);
        self.make(u, v)
    }
}

/// A random configuration document: four lines through random point pairs
/// for `n = 3`, random planes otherwise. Degenerate draws are left to the caller.
pub fn random_doc<F: Sample, R: Rng>(f: &F, n: usize, rng: &mut R, bound: i64) -> ConfigDoc {
    let vector = |rng: &mut R| -> Vec<Coeff> { (0..=n).map(|_| Coeff::from_text(f.format(&f.sample(rng, bound)))).collect() };
    let mut doc = ConfigDoc { field: f.descriptor(), n, planes: Vec::new(), lines: Vec::new() };
    if n == 3 {
        doc.lines = (0..4).map(|_| LineDoc { points: [vector(rng), vector(rng)] }).collect();
    } else {
        doc.planes = (0..2 * n - 2).map(|_| PlaneDoc { alpha: vector(rng), beta: vector(rng) }).collect();
    }
    doc
}
