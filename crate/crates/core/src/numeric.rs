//! Numeric tower: exact rationals extended by formal logarithms of primes,
//! the entropy parameter, and the two-lane (exact / float) value type.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// The entropy family parameter. The value 1 selects the exact-rational
/// evaluation lane; everything else runs in floating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaParam {
    One,
    General(f64),
}

impl AlphaParam {
    pub fn new(value: f64) -> Result<AlphaParam> {
        if !(value > 0.0) {
            return Err(Error::Input(format!("alpha must be positive, got {value}")));
        }
        if value == 1.0 {
            Ok(AlphaParam::One)
        } else {
            Ok(AlphaParam::General(value))
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            AlphaParam::One => 1.0,
            AlphaParam::General(a) => *a,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, AlphaParam::One)
    }
}

impl fmt::Display for AlphaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Exact element of the field ℚ extended by {ln p : p prime}:
/// a rational plus a finite rational combination of prime logarithms.
/// Zero iff all coordinates vanish, since the ln p are linearly
/// independent over ℚ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogExact {
    pub rat: BigRational,
    /// Coefficient of ln(p) per prime p; never stores zero coefficients.
    pub logs: BTreeMap<u64, BigRational>,
}

impl LogExact {
    pub fn zero() -> LogExact {
        LogExact {
            rat: BigRational::zero(),
            logs: BTreeMap::new(),
        }
    }

    pub fn from_rat(rat: BigRational) -> LogExact {
        LogExact {
            rat,
            logs: BTreeMap::new(),
        }
    }

    /// ln(n) for a positive integer, expanded over prime factors.
    pub fn ln_integer(n: u64) -> LogExact {
        assert!(n > 0, "ln of a non-positive integer");
        let mut logs = BTreeMap::new();
        let mut m = n;
        let mut p = 2u64;
        while p * p <= m {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if e > 0 {
                logs.insert(p, BigRational::from_integer(BigInt::from(e)));
            }
            p += 1;
        }
        if m > 1 {
            logs.insert(m, BigRational::one());
        }
        LogExact {
            rat: BigRational::zero(),
            logs,
        }
    }

    /// ln(q) for a positive rational.
    pub fn ln_rational(q: &BigRational) -> LogExact {
        assert!(q.is_positive(), "ln of a non-positive rational");
        let num = q.numer().to_u64().expect("numerator fits in u64");
        let den = q.denom().to_u64().expect("denominator fits in u64");
        &LogExact::ln_integer(num) - &LogExact::ln_integer(den)
    }

    pub fn scale(&self, c: &BigRational) -> LogExact {
        if c.is_zero() {
            return LogExact::zero();
        }
        LogExact {
            rat: &self.rat * c,
            logs: self.logs.iter().map(|(&p, v)| (p, v * c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.logs.is_empty()
    }

    pub fn to_f64(&self) -> f64 {
        let mut x = self.rat.to_f64().unwrap_or(f64::NAN);
        for (&p, c) in &self.logs {
            x += c.to_f64().unwrap_or(f64::NAN) * (p as f64).ln();
        }
        x
    }
}

impl std::ops::Add for &LogExact {
    type Output = LogExact;
    fn add(self, rhs: &LogExact) -> LogExact {
        let mut logs = self.logs.clone();
        for (&p, c) in &rhs.logs {
            let entry = logs.entry(p).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                logs.remove(&p);
            }
        }
        LogExact {
            rat: &self.rat + &rhs.rat,
            logs,
        }
    }
}

impl std::ops::Sub for &LogExact {
    type Output = LogExact;
    fn sub(self, rhs: &LogExact) -> LogExact {
        self + &rhs.neg()
    }
}

impl LogExact {
    pub fn neg(&self) -> LogExact {
        LogExact {
            rat: -&self.rat,
            logs: self.logs.iter().map(|(&p, c)| (p, -c)).collect(),
        }
    }
}

/// A scalar produced by entropy-like evaluations: exact on the α=1 lane,
/// floating point elsewhere. Mixing lanes demotes to float.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(LogExact),
    Float(f64),
}

impl Value {
    pub fn zero(alpha: AlphaParam) -> Value {
        if alpha.is_one() {
            Value::Exact(LogExact::zero())
        } else {
            Value::Float(0.0)
        }
    }

    pub fn from_rat(q: BigRational) -> Value {
        Value::Exact(LogExact::from_rat(q))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(x) => x.to_f64(),
            Value::Float(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    /// Exactly zero on the exact lane; magnitude under `tol` on the float lane.
    pub fn is_zero_within(&self, tol: f64) -> bool {
        match self {
            Value::Exact(x) => x.is_zero(),
            Value::Float(x) => x.abs() <= tol,
        }
    }

    pub fn add(&self, rhs: &Value) -> Value {
        match (self, rhs) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a + b),
            _ => Value::Float(self.to_f64() + rhs.to_f64()),
        }
    }

    pub fn sub(&self, rhs: &Value) -> Value {
        match (self, rhs) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a - b),
            _ => Value::Float(self.to_f64() - rhs.to_f64()),
        }
    }

    pub fn neg(&self) -> Value {
        match self {
            Value::Exact(a) => Value::Exact(a.neg()),
            Value::Float(x) => Value::Float(-x),
        }
    }

    pub fn scale_weight(&self, w: &Weight) -> Value {
        match (self, w) {
            (Value::Exact(a), Weight::Rat(c)) => Value::Exact(a.scale(c)),
            _ => Value::Float(self.to_f64() * w.to_f64()),
        }
    }
}

/// A probability weight raised to the power α: rational on the exact lane.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    Rat(BigRational),
    Float(f64),
}

impl Weight {
    /// `p^α` for a probability `p`.
    pub fn pow(alpha: AlphaParam, p: &BigRational) -> Weight {
        match alpha {
            AlphaParam::One => Weight::Rat(p.clone()),
            AlphaParam::General(a) => Weight::Float(p.to_f64().unwrap_or(f64::NAN).powf(a)),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Weight::Rat(q) => q.to_f64().unwrap_or(f64::NAN),
            Weight::Float(x) => *x,
        }
    }
}

/// Entropy of a weight vector: `−Σ p ln p` at α = 1 (exact, with formal
/// logarithms), `(Σ p^α − 1)/(1−α)` otherwise.
pub fn entropy(alpha: AlphaParam, weights: &[BigRational]) -> Value {
    match alpha {
        AlphaParam::One => {
            let mut acc = LogExact::zero();
            for p in weights {
                if p.is_zero() {
                    continue;
                }
                acc = &acc - &LogExact::ln_rational(p).scale(p);
            }
            Value::Exact(acc)
        }
        AlphaParam::General(a) => {
            let s: f64 = weights
                .iter()
                .filter(|p| !p.is_zero())
                .map(|p| p.to_f64().unwrap_or(f64::NAN).powf(a))
                .sum();
            Value::Float((s - 1.0) / (1.0 - a))
        }
    }
}

/// Entropy of the binary law `(p, 1−p)`.
pub fn binary_entropy(alpha: AlphaParam, p: &BigRational) -> Value {
    entropy(alpha, &[p.clone(), BigRational::one() - p])
}

/// Parses an exact rational from `a/b` or integer form.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Input(format!("`{t}` is not an integer")))
    };
    match text.split_once('/') {
        Some((a, b)) => {
            let den = parse_int(b)?;
            if den.is_zero() {
                return Err(Error::Input(format!("zero denominator in `{text}`")));
            }
            Ok(BigRational::new(parse_int(a)?, den))
        }
        None => Ok(BigRational::from_integer(parse_int(text)?)),
    }
}

/// Renders a rational as `a/b` (or `a` when integral).
pub fn rational_str(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn formal_logs_cancel_exactly() {
        // ln(6) - ln(2) - ln(3) = 0.
        let six = LogExact::ln_integer(6);
        let two = LogExact::ln_integer(2);
        let three = LogExact::ln_integer(3);
        assert!((&(&six - &two) - &three).is_zero());
    }

    #[test]
    fn uniform_binary_entropy_is_ln_two() {
        let h = entropy(AlphaParam::One, &[rat(1, 2), rat(1, 2)]);
        match h {
            Value::Exact(x) => {
                assert!(x.rat.is_zero());
                assert_eq!(x.logs.get(&2), Some(&BigRational::one()));
                assert_eq!(x.logs.len(), 1);
            }
            Value::Float(_) => panic!("expected exact lane"),
        }
    }

    #[test]
    fn quadratic_entropy_of_uniform_binary() {
        let h = entropy(AlphaParam::new(2.0).unwrap(), &[rat(1, 2), rat(1, 2)]);
        assert!((h.to_f64() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dirac_entropy_is_zero_on_both_lanes() {
        let w = [rat(1, 1), rat(0, 1)];
        assert!(entropy(AlphaParam::One, &w).is_zero_within(0.0));
        assert!(entropy(AlphaParam::new(0.5).unwrap(), &w).is_zero_within(0.0));
    }

    #[test]
    fn chain_rule_on_half_third_sixth_is_exact() {
        // H(1/2,1/3,1/6) = H(1/2,1/2) + 1/2 H(2/3,1/3), exactly.
        let lhs = entropy(AlphaParam::One, &[rat(1, 2), rat(1, 3), rat(1, 6)]);
        let a = entropy(AlphaParam::One, &[rat(1, 2), rat(1, 2)]);
        let b = entropy(AlphaParam::One, &[rat(2, 3), rat(1, 3)]);
        let rhs = a.add(&b.scale_weight(&Weight::Rat(rat(1, 2))));
        assert_eq!(lhs, rhs);
        assert!(lhs.sub(&rhs).is_zero_within(0.0));
    }

    #[test]
    fn alpha_near_one_converges_to_shannon() {
        let w = [rat(1, 2), rat(1, 3), rat(1, 6)];
        let target = entropy(AlphaParam::One, &w).to_f64();
        let mut prev_gap = f64::INFINITY;
        for a in [0.9, 0.99, 0.999] {
            let gap = (entropy(AlphaParam::new(a).unwrap(), &w).to_f64() - target).abs();
            assert!(gap < prev_gap);
            prev_gap = gap;
        }
        assert!(prev_gap < 2e-3);
    }

    #[test]
    fn rational_round_trip() {
        let q = parse_rational("-3/9").unwrap();
        assert_eq!(rational_str(&q), "-1/3");
        assert_eq!(rational_str(&parse_rational("4").unwrap()), "4");
        assert!(parse_rational("1/0").is_err());
    }
}
