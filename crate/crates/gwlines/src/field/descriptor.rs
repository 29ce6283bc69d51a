use super::{Field, FieldError, FiniteField, QuadExt, Rationals};

/// A base field chosen at run time from its text descriptor.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyField {
    Rationals(Rationals),
    QuadRationals(QuadExt<Rationals>),
    Finite(FiniteField),
}

impl AnyField {
    /// Parses `"Q"`, `"Q(sqrt d)"`, `"F p"` or `"F p^m"`.
    pub fn parse(text: &str) -> Result<Self, FieldError> {
        let t = text.trim();
        let bad = |why: &str| FieldError::Parse(text.to_string(), why.to_string());
        if t == "Q" {
            return Ok(AnyField::Rationals(Rationals));
        }
        if let Some(rest) = t.strip_prefix("Q(sqrt").and_then(|r| r.strip_suffix(')')) {
            let d: i64 = rest.trim().parse().map_err(|_| bad("expected Q(sqrt d)"))?;
            return Ok(AnyField::QuadRationals(QuadExt::rational(d)?));
        }
        if let Some(rest) = t.strip_prefix('F') {
            let rest = rest.trim();
            let (p, m) = match rest.split_once('^') {
                Some((p, m)) => (p.trim(), m.trim()),
                None => (rest, "1"),
            };
            let p: u32 = p.parse().map_err(|_| bad("expected F p^m"))?;
            let m: u32 = m.parse().map_err(|_| bad("expected F p^m"))?;
            return Ok(AnyField::Finite(FiniteField::new(p, m)?));
        }
        Err(bad("unknown field"))
    }

    pub fn descriptor(&self) -> String {
        match self {
            AnyField::Rationals(f) => f.descriptor(),
            AnyField::QuadRationals(f) => f.descriptor(),
            AnyField::Finite(f) => f.descriptor(),
        }
    }
}
