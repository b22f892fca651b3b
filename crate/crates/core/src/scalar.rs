//! Exact nonzero complex numbers of the form `q·e^{2πiθ}` with `q` a positive
//! rational and `θ` a rational phase in `[0, 1)`.

use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Rational numbers used throughout the crate.
pub type Rat = Ratio<i128>;

/// Phases live in `Q/Z`, stored as a reduced fraction in `[0, 1)`.
pub type Phase = Ratio<i64>;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    magnitude: Rat,
    phase: Phase,
}

/// Product of reduced magnitudes, using 64-bit arithmetic when every part fits.
fn mul_magnitudes(a: Rat, b: Rat) -> Rat {
    let small = |x: &i128| i64::try_from(*x).ok();
    if let (Some(an), Some(ad), Some(bn), Some(bd)) =
        (small(a.numer()), small(a.denom()), small(b.numer()), small(b.denom()))
    {
        let g1 = an.gcd(&bd);
        let g2 = bn.gcd(&ad);
        let n = i128::from(an / g1) * i128::from(bn / g2);
        let d = i128::from(ad / g2) * i128::from(bd / g1);
        return Rat::new_raw(n, d);
    }
    a * b
}

fn reduce_phase(p: Phase) -> Phase {
    let f = p - p.floor();
    if f < Phase::zero() {
        f + Phase::one()
    } else {
        f
    }
}

impl Scalar {
    pub fn new(magnitude: Rat, phase: Phase) -> Result<Scalar> {
        if !magnitude.is_positive() {
            return Err(Error::NonPositiveMagnitude(magnitude.to_string()));
        }
        Ok(Scalar { magnitude, phase: reduce_phase(phase) })
    }

    pub fn one() -> Scalar {
        Scalar { magnitude: Rat::one(), phase: Phase::zero() }
    }

    pub fn minus_one() -> Scalar {
        Scalar::root_of_unity(1, 2)
    }

    /// `e^{2πi·num/den}`.
    pub fn root_of_unity(num: i64, den: i64) -> Scalar {
        Scalar { magnitude: Rat::one(), phase: reduce_phase(Phase::new(num, den)) }
    }

    /// A nonzero rational as a scalar; negative values get phase 1/2.
    pub fn from_rational(r: Rat) -> Result<Scalar> {
        if r.is_zero() {
            return Err(Error::NonPositiveMagnitude("0".into()));
        }
        let phase = if r.is_negative() { Phase::new(1, 2) } else { Phase::zero() };
        Ok(Scalar { magnitude: r.abs(), phase })
    }

    pub fn from_integer(n: i128) -> Result<Scalar> {
        Scalar::from_rational(Rat::from_integer(n))
    }

    pub fn magnitude(&self) -> Rat {
        self.magnitude
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn is_one(&self) -> bool {
        self.magnitude.is_one() && self.phase.is_zero()
    }

    pub fn is_root_of_unity(&self) -> bool {
        self.magnitude.is_one()
    }

    /// The value as a real rational, if the phase is 0 or 1/2.
    pub fn to_rational(&self) -> Option<Rat> {
        if self.phase.is_zero() {
            Some(self.magnitude)
        } else if self.phase == Phase::new(1, 2) {
            Some(-self.magnitude)
        } else {
            None
        }
    }

    pub fn inv(&self) -> Scalar {
        Scalar { magnitude: self.magnitude.recip(), phase: reduce_phase(-self.phase) }
    }

    pub fn pow(&self, e: i64) -> Scalar {
        let base = if e < 0 { self.inv() } else { *self };
        let k = e.unsigned_abs();
        let mut magnitude = Rat::one();
        for _ in 0..k {
            magnitude *= base.magnitude;
        }
        let phase = reduce_phase(base.phase * Phase::from_integer(k as i64));
        Scalar { magnitude, phase }
    }

    /// All `n` scalars whose `n`-th power is `self`, ordered by phase offset.
    pub fn nth_roots(&self, n: u32) -> Result<Vec<Scalar>> {
        assert!(n >= 1, "nth_roots needs n >= 1");
        let irrational = || Error::IrrationalRoot { value: self.to_string(), n };
        let num = exact_root(*self.magnitude.numer(), n).ok_or_else(irrational)?;
        let den = exact_root(*self.magnitude.denom(), n).ok_or_else(irrational)?;
        let magnitude = Rat::new(num, den);
        let n64 = n as i64;
        Ok((0..n64)
            .map(|k| Scalar {
                magnitude,
                phase: reduce_phase((self.phase + Phase::from_integer(k)) / Phase::from_integer(n64)),
            })
            .collect())
    }

    /// The root with the smallest phase offset.
    pub fn principal_root(&self, n: u32) -> Result<Scalar> {
        Ok(self.nth_roots(n)?[0])
    }
}

/// Exact positive integer root, if it exists.
pub(crate) fn exact_root(x: i128, n: u32) -> Option<i128> {
    if x < 0 {
        return None;
    }
    if x < 2 || n == 1 {
        return Some(x);
    }
    let approx = (x as f64).powf(1.0 / n as f64).round() as i128;
    for cand in approx.saturating_sub(2).max(0)..=approx + 2 {
        match cand.checked_pow(n) {
            Some(p) if p == x => return Some(cand),
            _ => {}
        }
    }
    None
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::one()
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        let magnitude = if self.magnitude.is_one() {
            rhs.magnitude
        } else if rhs.magnitude.is_one() {
            self.magnitude
        } else {
            mul_magnitudes(self.magnitude, rhs.magnitude)
        };
        // both phases lie in [0, 1)
        let phase = if self.phase.is_zero() {
            rhs.phase
        } else if rhs.phase.is_zero() {
            self.phase
        } else {
            let sum = self.phase + rhs.phase;
            if sum >= Phase::one() {
                sum - Phase::one()
            } else {
                sum
            }
        };
        Scalar { magnitude, phase }
    }
}

impl Div for Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Scalar) -> Scalar {
        self * rhs.inv()
    }
}

impl std::ops::MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = *self * rhs;
    }
}

impl std::iter::Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |a, b| a * b)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}@{}/{}", self.magnitude.numer(), self.magnitude.denom(), self.phase.numer(), self.phase.denom())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_fraction<T>(s: &str) -> Option<Ratio<T>>
where
    T: Integer + Clone + FromStr,
{
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: T = n.trim().parse().ok()?;
            let d: T = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Ratio::new(n, d))
        }
        None => Some(Ratio::from_integer(s.parse().ok()?)),
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `p/q@r/s`, `p/q`, `p@r/s` and plain integers; a bare `1` is the identity.
    fn from_str(s: &str) -> Result<Scalar> {
        let bad = || Error::Parse(format!("invalid scalar {s:?}, expected p/q@r/s"));
        let (mag, phase) = match s.split_once('@') {
            Some((m, p)) => (m, Some(p)),
            None => (s, None),
        };
        let magnitude: Rat = parse_fraction(mag).ok_or_else(bad)?;
        let phase: Phase = match phase {
            Some(p) => parse_fraction(p).ok_or_else(bad)?,
            None => Phase::zero(),
        };
        if !magnitude.is_positive() {
            return Err(bad());
        }
        Scalar::new(magnitude, phase)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Scalar, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Phase coordinates of a list of scalars as residues modulo a common modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseVector {
    pub modulus: i64,
    pub residues: Vec<i64>,
}

/// Magnitudes as exponent vectors over the primes occurring in the list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagnitudeExponentVector {
    pub primes: Vec<i128>,
    /// `exponents[k][p]` is the exponent of `primes[p]` in entry `k`.
    pub exponents: Vec<Vec<i64>>,
}

fn factor(mut n: i128, out: &mut Vec<(i128, i64)>, sign: i64) {
    let mut p: i128 = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, sign * e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, sign));
    }
}

pub fn decompose(values: &[Scalar]) -> (PhaseVector, MagnitudeExponentVector) {
    let modulus = values.iter().fold(1i64, |acc, v| acc.lcm(v.phase.denom()));
    let residues = values.iter().map(|v| v.phase.numer() * (modulus / v.phase.denom())).collect();
    let factored: Vec<Vec<(i128, i64)>> = values
        .iter()
        .map(|v| {
            let mut f = Vec::new();
            factor(*v.magnitude.numer(), &mut f, 1);
            factor(*v.magnitude.denom(), &mut f, -1);
            f
        })
        .collect();
    let mut primes: Vec<i128> = factored.iter().flatten().map(|(p, _)| *p).collect();
    primes.sort_unstable();
    primes.dedup();
    let exponents = factored
        .iter()
        .map(|f| {
            let mut row = vec![0i64; primes.len()];
            for (p, e) in f {
                let idx = primes.binary_search(p).expect("prime listed");
                row[idx] += e;
            }
            row
        })
        .collect();
    (PhaseVector { modulus, residues }, MagnitudeExponentVector { primes, exponents })
}

pub fn recompose(phases: &PhaseVector, mags: &MagnitudeExponentVector) -> Vec<Scalar> {
    phases
        .residues
        .iter()
        .zip(&mags.exponents)
        .map(|(r, exps)| {
            let mut m = Rat::one();
            for (p, e) in mags.primes.iter().zip(exps) {
                let pe = Rat::from_integer(*p).pow(*e as i32);
                m *= pe;
            }
            Scalar { magnitude: m, phase: reduce_phase(Phase::new(*r, phases.modulus)) }
        })
        .collect()
}
