use entrolab::logistic::BracketSample;
use entrolab::{EntropyBound, Rational};
use serde_json::{json, Value};

const DIGITS: usize = 15;

/// Decimal rendering rounded down (`up = false`) or up.
pub fn decimal(x: &Rational, up: bool) -> String {
    if x.is_integer() {
        return x.to_decimal(0);
    }
    let down = x.to_decimal(DIGITS);
    let exact = down.parse::<Rational>().is_ok_and(|d| &d == x);
    if !up || exact || x.is_negative() {
        return down;
    }
    let ulp: Rational = format!("1e-{DIGITS}").parse().expect("valid literal");
    (x + &ulp).to_decimal(DIGITS)
}

pub fn bound_line(b: &EntropyBound) -> String {
    format!("h in [{},{}] {}", decimal(b.lo(), false), decimal(b.hi(), true), b.provenance())
}

pub fn bound_json(b: &EntropyBound) -> Value {
    json!({
        "lo": b.lo().to_string(),
        "hi": b.hi().to_string(),
        "lo_decimal": decimal(b.lo(), false),
        "hi_decimal": decimal(b.hi(), true),
        "provenance": b.provenance().to_string(),
    })
}

pub fn sample_line(s: &BracketSample) -> String {
    let side = s.side.to_string().to_lowercase();
    let p = s.witness_period.map_or("-".to_string(), |p| p.to_string());
    format!("{side}\t{}\t{p}\t{}", decimal(&s.d, false), bound_line(&s.entropy))
}

pub fn sample_json(s: &BracketSample) -> Value {
    json!({
        "side": s.side.to_string(),
        "d": s.d.to_string(),
        "witness_period": s.witness_period,
        "entropy": bound_json(&s.entropy),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_directions() {
        let third = Rational::frac(1, 3);
        assert_eq!(decimal(&third, false), "0.333333333333333");
        assert_eq!(decimal(&third, true), "0.333333333333334");
        assert_eq!(decimal(&Rational::frac(1, 2), true), "0.500000000000000");
        assert_eq!(decimal(&Rational::int(4), true), "4");
    }
}
