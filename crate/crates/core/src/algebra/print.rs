//! Text form of expressions; accepted back by [`super::parse`].

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{Expression, FieldFactor, Params, Term};

impl fmt::Display for FieldFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.derivs {
            write!(f, "d[{d}]")?;
        }
        if self.conj {
            f.write_str("conj(")?;
        }
        f.write_str(self.field.name())?;
        if !self.indices.is_empty() {
            let idx: Vec<&str> = self.indices.iter().map(|i| i.as_str()).collect();
            write!(f, "[{}]", idx.join(","))?;
        }
        if self.conj {
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn power(name: &str, exp: i32) -> Option<String> {
    match exp {
        0 => None,
        1 => Some(name.to_string()),
        e => Some(format!("{name}^{e}")),
    }
}

fn params_parts(p: &Params) -> impl Iterator<Item = String> {
    [power("g", p.g), power("gp", p.gp), power("s", p.s), power("R", p.r)].into_iter().flatten()
}

/// Returns (negative, body).
fn term_text(t: &Term) -> (bool, String) {
    let (re, im) = (&t.coeff.re, &t.coeff.im);
    let (neg, mag) = if im.is_zero() {
        (re.is_negative(), Some(re.abs()).filter(|m| !m.is_one()).map(|m| m.to_string()))
    } else if re.is_zero() {
        let m = im.abs();
        (im.is_negative(), Some(if m.is_one() { "i".to_string() } else { format!("{m}*i") }))
    } else {
        let sign = if im.is_negative() { '-' } else { '+' };
        let m = im.abs();
        let imtext = if m.is_one() { "i".to_string() } else { format!("{m}*i") };
        (false, Some(format!("({re}{sign}{imtext})")))
    };
    let mut parts: Vec<String> = Vec::new();
    parts.extend(mag);
    parts.extend(power("j", t.jdeg as i32));
    parts.extend(params_parts(&t.params));
    parts.extend(t.factors.iter().map(|f| f.to_string()));
    if parts.is_empty() {
        parts.push("1".into());
    }
    (neg, parts.join("*"))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (neg, body) = term_text(self);
        if neg {
            f.write_str("-")?;
        }
        f.write_str(&body)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, t) in self.terms.iter().enumerate() {
            let (neg, body) = term_text(t);
            match (n, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => f.write_str(&body)?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::algebra::parse;

    #[test]
    fn prints_readable_terms() {
        let e = parse("-1/4*d[mu]W3[nu]*d[mu]W3[nu]").unwrap();
        assert_eq!(e.to_string(), "-1/4*d[nu]W3[mu]*d[nu]W3[mu]");
        let e = parse("(1/2 + 3*i)*j^2*g*s^-1*conj(phi1)*d[nu]phi2").unwrap();
        assert_eq!(e.to_string(), "(1/2+3*i)*j^2*g*s^-1*conj(phi1)*d[nu]phi2");
        assert_eq!(parse("0").unwrap().to_string(), "0");
        assert_eq!(parse("-i").unwrap().to_string(), "-i");
        assert_eq!(parse("W+[mu]*W-[mu] - rho").unwrap().to_string(), "W+[mu]*W-[mu] - rho");
    }
}
