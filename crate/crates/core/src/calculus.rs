//! Formal Laurent calculus in the six coordinates `z, w, t, z−w, z−t, w−t`.
//!
//! A [`Space`] is an ordered list of levels, largest first. A level holding a
//! single coordinate is a Laurent tower step; a level holding several
//! coordinates is a localized polynomial block whose monomials stay symbolic.
//! Expansion rewrites `x = σy + τr` with `y` in the first level where `x` has
//! a component and `r` a coordinate living further down, so
//! `x^n = Σ_k C(n,k) σ^{n−k} τ^k y^{n−k} r^k`, with `r^k` expanded recursively.
//!
//! Every series carries a gauge: a tower whose level indices weight each
//! coordinate. The weighted order `ω` of a term is the sum of exponent times
//! weight. Expansion steps raise `ω`, so truncating at a bound `B` keeps every
//! term below `B` exact, and two expansion paths into the same tower can be
//! compared coefficient by coefficient up to `B`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Z,
    W,
    T,
    ZW,
    ZT,
    WT,
}

pub type Exponents = [i32; 6];

type Vec3 = [i64; 3];

impl Coord {
    pub const ALL: [Coord; 6] = [Coord::Z, Coord::W, Coord::T, Coord::ZW, Coord::ZT, Coord::WT];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Coefficients in the basis `(z, w, t)`.
    pub fn vector(self) -> Vec3 {
        match self {
            Coord::Z => [1, 0, 0],
            Coord::W => [0, 1, 0],
            Coord::T => [0, 0, 1],
            Coord::ZW => [1, -1, 0],
            Coord::ZT => [1, 0, -1],
            Coord::WT => [0, 1, -1],
        }
    }

    pub fn name(self) -> &'static str {
        ["z", "w", "t", "z-w", "z-t", "w-t"][self.index()]
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Coord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Coord> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('−', "-");
        Coord::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::Parse(format!("unknown coordinate {s:?}")))
    }
}

/// `coeff · z^a w^b t^c (z−w)^d (z−t)^f (w−t)^g`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub exponents: Exponents,
    pub coeff: Rat,
}

impl Monomial {
    pub fn new(exponents: Exponents) -> Monomial {
        Monomial { exponents, coeff: Rat::one() }
    }

    pub fn of(c: Coord, n: i32) -> Monomial {
        let mut e = [0; 6];
        e[c.index()] = n;
        Monomial::new(e)
    }

    /// Parses `a,b,c,d,f,g`.
    pub fn parse_exponents(s: &str) -> Result<Monomial> {
        let parts: Vec<i32> = s
            .split(',')
            .map(|p| p.trim().parse::<i32>().map_err(|e| Error::Parse(format!("exponent {p:?}: {e}"))))
            .collect::<Result<_>>()?;
        let exps: Exponents =
            parts.try_into().map_err(|v: Vec<i32>| Error::Parse(format!("expected 6 exponents, got {}", v.len())))?;
        Ok(Monomial::new(exps))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_term(&self.exponents, &self.coeff))
    }
}

fn format_term(e: &Exponents, coeff: &Rat) -> String {
    let factors: Vec<String> = Coord::ALL
        .iter()
        .filter(|c| e[c.index()] != 0)
        .map(|c| {
            let base = if c.name().len() > 1 { format!("({})", c.name()) } else { c.name().to_string() };
            match e[c.index()] {
                1 => base,
                n => format!("{base}^{n}"),
            }
        })
        .collect();
    match (factors.is_empty(), coeff.is_one()) {
        (true, _) => coeff.to_string(),
        (false, true) => factors.join(" "),
        (false, false) if *coeff == -Rat::one() => format!("-{}", factors.join(" ")),
        (false, false) => format!("{} {}", coeff, factors.join(" ")),
    }
}

fn rank(vs: &[Vec3]) -> usize {
    let mut rows: Vec<[i128; 3]> = vs.iter().map(|v| [v[0] as i128, v[1] as i128, v[2] as i128]).collect();
    let mut r = 0;
    for col in 0..3 {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let (a, b) = (rows[r][col], rows[i][col]);
                for k in 0..3 {
                    rows[i][k] = rows[i][k] * a - rows[r][k] * b;
                }
            }
        }
        r += 1;
    }
    r
}

fn in_span(x: Vec3, vs: &[Vec3]) -> bool {
    let mut with = vs.to_vec();
    with.push(x);
    rank(&with) == rank(vs)
}

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scale(s: i64, a: Vec3) -> Vec3 {
    [s * a[0], s * a[1], s * a[2]]
}

/// An ordered list of levels, largest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    pub name: String,
    pub levels: Vec<Vec<Coord>>,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levels: Vec<String> = self
            .levels
            .iter()
            .map(|l| {
                let names: Vec<&str> = l.iter().map(|c| c.name()).collect();
                if l.len() == 1 {
                    names[0].to_string()
                } else {
                    format!("{{{}}}", names.join(","))
                }
            })
            .collect();
        write!(f, "{} [{}]", self.name, levels.join(" ; "))
    }
}

impl Space {
    pub fn new(name: &str, levels: Vec<Vec<Coord>>) -> Space {
        Space { name: name.to_string(), levels }
    }

    /// `V((c₀))((c₁))…`, one coordinate per level.
    pub fn tower(name: &str, coords: &[Coord]) -> Space {
        Space::new(name, coords.iter().map(|c| vec![*c]).collect())
    }

    /// The fully localized polynomial space in all six coordinates.
    pub fn universal() -> Space {
        Space::new("ijkl", vec![Coord::ALL.to_vec()])
    }

    pub fn is_tower(&self) -> bool {
        self.levels.iter().all(|l| l.len() == 1)
    }

    pub fn level_of(&self, c: Coord) -> Option<usize> {
        self.levels.iter().position(|l| l.contains(&c))
    }

    fn span_below(&self, level: usize) -> Vec<Vec3> {
        self.levels[level + 1..].iter().flatten().map(|c| c.vector()).collect()
    }

    /// First level in which `x` has a component.
    fn leading_level(&self, x: Vec3) -> Option<usize> {
        let all: Vec<Vec3> = self.levels.iter().flatten().map(|c| c.vector()).collect();
        if !in_span(x, &all) || x == [0, 0, 0] {
            return None;
        }
        (0..self.levels.len()).find(|&l| !in_span(x, &self.span_below(l)))
    }

    /// Weight of each coordinate when this space is used as a gauge.
    fn weights(&self) -> [Option<i64>; 6] {
        Coord::ALL.map(|c| self.leading_level(c.vector()).map(|l| l as i64))
    }
}

#[derive(Clone, Debug)]
struct Gauge {
    space: Space,
    weights: [Option<i64>; 6],
}

impl Gauge {
    fn new(space: &Space) -> Gauge {
        Gauge { space: space.clone(), weights: space.weights() }
    }

    fn omega(&self, e: &Exponents) -> Result<i64> {
        let mut total = 0;
        for c in Coord::ALL {
            let n = e[c.index()];
            if n != 0 {
                let w = self.weights[c.index()]
                    .ok_or_else(|| Error::NoSuchEmbedding(format!("{} does not live in {}", c, self.space.name)))?;
                total += w * n as i64;
            }
        }
        Ok(total)
    }

    fn weight_of(&self, x: Vec3) -> Result<i64> {
        self.space
            .leading_level(x)
            .map(|l| l as i64)
            .ok_or_else(|| Error::NoSuchEmbedding(format!("vector {x:?} does not live in {}", self.space.name)))
    }
}

/// Generalized binomial coefficient `C(n, k)`.
pub fn binomial(n: i64, k: u32) -> Rat {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..k as i128 {
        num *= n as i128 - i;
        den *= i + 1;
        let g = num_integer::gcd(num, den);
        num /= g;
        den /= g;
    }
    Rat::new(num, den)
}

/// A truncated series: exact for every term of weighted order at most `frontier`.
#[derive(Clone, Debug)]
pub struct Series {
    space: Space,
    gauge: Gauge,
    terms: BTreeMap<Exponents, Rat>,
    floor: i64,
    frontier: Option<i64>,
}

type Terms = Vec<(Exponents, Rat)>;

impl Series {
    /// A single monomial in `space`, measured by `gauge`.
    pub fn monomial(m: &Monomial, space: &Space, gauge: &Space) -> Result<Series> {
        let gauge = Gauge::new(gauge);
        let floor = gauge.omega(&m.exponents)?;
        let mut terms = BTreeMap::new();
        if !m.coeff.is_zero() {
            terms.insert(m.exponents, m.coeff);
        }
        Ok(Series { space: space.clone(), gauge, terms, floor, frontier: None })
    }

    /// A finite combination of monomials in the universal space.
    pub fn universal(ms: &[Monomial], gauge: &Space) -> Result<Series> {
        let universal = Space::universal();
        let mut acc = Series::zero(&universal, gauge);
        for m in ms {
            acc = acc.add(&Series::monomial(m, &universal, gauge)?)?;
        }
        Ok(acc)
    }

    pub fn zero(space: &Space, gauge: &Space) -> Series {
        Series {
            space: space.clone(),
            gauge: Gauge::new(gauge),
            terms: BTreeMap::new(),
            floor: i64::MAX,
            frontier: None,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn gauge(&self) -> &Space {
        &self.gauge.space
    }

    pub fn frontier(&self) -> Option<i64> {
        self.frontier
    }

    /// Lower bound on the weighted order of every term, including unknown ones.
    pub fn floor(&self) -> i64 {
        self.floor
    }

    pub fn is_exact(&self) -> bool {
        self.frontier.is_none()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponents) -> Rat {
        self.terms.get(e).copied().unwrap_or_else(Rat::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self, e: &Exponents) -> i64 {
        self.gauge.omega(e).expect("terms live in the gauge")
    }

    fn check_tags(&self, other: &Series) -> Result<()> {
        if self.space != other.space || self.gauge.space != other.gauge.space {
            return Err(Error::TagMismatch(
                format!("{} / {}", self.space.name, self.gauge.space.name),
                format!("{} / {}", other.space.name, other.gauge.space.name),
            ));
        }
        Ok(())
    }

    fn prune(&mut self) {
        if let Some(b) = self.frontier {
            let gauge = &self.gauge;
            self.terms.retain(|e, _| gauge.omega(e).expect("gauge") <= b);
        }
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_tags(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            *out.terms.entry(*e).or_insert_with(Rat::zero) += c;
        }
        out.floor = self.floor.min(other.floor);
        out.frontier = min_opt(self.frontier, other.frontier);
        out.prune();
        Ok(out)
    }

    pub fn scale(&self, k: Rat) -> Series {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= k;
        }
        out.prune();
        out
    }

    pub fn neg(&self) -> Series {
        self.scale(-Rat::one())
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_tags(other)?;
        let frontier = match (self.frontier, other.frontier) {
            (None, None) => None,
            (Some(a), None) => Some(a.saturating_add(other.floor)),
            (None, Some(b)) => Some(b.saturating_add(self.floor)),
            (Some(a), Some(b)) => Some(a.saturating_add(other.floor).min(b.saturating_add(self.floor))),
        };
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = add_exps(ea, eb);
                *terms.entry(e).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        let mut out = Series {
            space: self.space.clone(),
            gauge: self.gauge.clone(),
            terms,
            floor: self.floor.saturating_add(other.floor),
            frontier,
        };
        out.prune();
        Ok(out)
    }

    /// Drops every term above `bound` and records the new frontier.
    pub fn truncate(&self, bound: i64) -> Series {
        let mut out = self.clone();
        out.frontier = min_opt(self.frontier, Some(bound));
        out.prune();
        out
    }

    /// Rewrites every term in `target`, measuring orders by this series' gauge.
    /// The result is exact up to `min(bound, frontier)`.
    pub fn reexpand(&self, target: &Space, bound: i64) -> Result<Series> {
        let b = min_opt(self.frontier, Some(bound)).expect("bounded");
        let mut terms = BTreeMap::new();
        let mut truncated = self.frontier.is_some();
        for (e, c) in &self.terms {
            let budget = b - self.gauge.omega(e)?;
            if budget < 0 {
                continue;
            }
            let (expanded, cut) = expand_exponents(e, target, &self.gauge, budget)?;
            truncated |= cut;
            for (e2, c2) in expanded {
                *terms.entry(e2).or_insert_with(Rat::zero) += c * c2;
            }
        }
        let mut out = Series {
            space: target.clone(),
            gauge: self.gauge.clone(),
            terms,
            floor: self.floor,
            frontier: if truncated { Some(b) } else { None },
        };
        out.prune();
        Ok(out)
    }

    /// Renames coordinate `from` to `to` in every term, landing in `target`.
    pub fn rename(&self, from: Coord, to: Coord, target: &Space) -> Result<Series> {
        let gauge = Gauge::new(target);
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = *e;
            e2[to.index()] += e2[from.index()];
            e2[from.index()] = 0;
            *terms.entry(e2).or_insert_with(Rat::zero) += c;
        }
        if gauge.weights[to.index()] != self.gauge.weights[from.index()] {
            return Err(Error::TagMismatch(self.gauge.space.name.clone(), target.name.clone()));
        }
        let out = Series { space: target.clone(), gauge, terms, floor: self.floor, frontier: self.frontier };
        for e in out.terms.keys() {
            out.gauge.omega(e)?;
        }
        Ok(out)
    }

    /// First exponent vector, in canonical order, on which the two series
    /// differ at or below their common frontier.
    pub fn first_difference(&self, other: &Series) -> Result<Option<Exponents>> {
        self.check_tags(other)?;
        let bound = min_opt(self.frontier, other.frontier);
        let keys: std::collections::BTreeSet<&Exponents> = self.terms.keys().chain(other.terms.keys()).collect();
        for e in keys {
            if bound.is_some_and(|b| self.gauge.omega(e).expect("gauge") > b) {
                continue;
            }
            if self.coefficient(e) != other.coefficient(e) {
                return Ok(Some(*e));
            }
        }
        Ok(None)
    }

    pub fn agrees_with(&self, other: &Series) -> Result<bool> {
        Ok(self.first_difference(other)?.is_none())
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            f.write_str(&format_term(e, c))?;
        }
        if let Some(b) = self.frontier {
            write!(f, " + O(order > {b})")?;
        }
        Ok(())
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn add_exps(a: &Exponents, b: &Exponents) -> Exponents {
    let mut e = *a;
    for k in 0..6 {
        e[k] += b[k];
    }
    e
}

/// Expands a product of coordinate powers, keeping terms whose order exceeds
/// the product's base order by at most `budget`. Returns whether anything was cut.
fn expand_exponents(e: &Exponents, target: &Space, gauge: &Gauge, budget: i64) -> Result<(Terms, bool)> {
    let mut acc: Terms = vec![([0; 6], Rat::one())];
    let mut acc_base = 0i64;
    let mut truncated = false;
    for c in Coord::ALL {
        let n = e[c.index()];
        if n == 0 {
            continue;
        }
        let (factor, cut) = expand_power(c.vector(), n as i64, target, 0, gauge, budget)?;
        truncated |= cut;
        let factor_base = gauge.weight_of(c.vector())? * n as i64;
        let mut next: BTreeMap<Exponents, Rat> = BTreeMap::new();
        for (ea, ca) in &acc {
            let da = gauge.omega(ea)? - acc_base;
            for (eb, cb) in &factor {
                let db = gauge.omega(eb)? - factor_base;
                if da + db <= budget {
                    *next.entry(add_exps(ea, eb)).or_insert_with(Rat::zero) += ca * cb;
                } else {
                    truncated = true;
                }
            }
        }
        acc = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        acc_base += factor_base;
    }
    Ok((acc, truncated))
}

/// `x^n` in `target`, starting the search at level `start`.
fn expand_power(x: Vec3, n: i64, target: &Space, start: usize, gauge: &Gauge, budget: i64) -> Result<(Terms, bool)> {
    if n == 0 {
        return Ok((vec![([0; 6], Rat::one())], false));
    }
    for level in &target.levels[start..] {
        for &c in level {
            let v = c.vector();
            let sign = if v == x {
                1
            } else if scale(-1, v) == x {
                -1
            } else {
                continue;
            };
            let mut e = [0; 6];
            e[c.index()] = n as i32;
            let coeff = if sign == -1 && n % 2 != 0 { -Rat::one() } else { Rat::one() };
            return Ok((vec![(e, coeff)], false));
        }
    }
    let no_path = || Error::NoSuchEmbedding(format!("cannot expand {} in {}", describe_vec(x), target));
    let level = (start..target.levels.len()).find(|&l| !in_span(x, &target.span_below(l))).ok_or_else(no_path)?;
    let below = target.span_below(level);
    let (sigma, y, tau, r) = target.levels[level]
        .iter()
        .flat_map(|&y| [1i64, -1].map(move |s| (s, y)))
        .find_map(|(sigma, y)| {
            let rest = sub(x, scale(sigma, y.vector()));
            if !in_span(rest, &below) {
                return None;
            }
            Coord::ALL.into_iter().find_map(|r| {
                if r.vector() == rest {
                    Some((sigma, y, 1i64, r))
                } else if scale(-1, r.vector()) == rest {
                    Some((sigma, y, -1i64, r))
                } else {
                    None
                }
            })
        })
        .ok_or_else(no_path)?;
    let step = gauge.weight_of(r.vector())? - gauge.weight_of(y.vector())?;
    if step < 1 {
        return Err(Error::NoSuchEmbedding(format!(
            "expanding {} in powers of {}/{} does not converge in {}",
            describe_vec(x),
            r,
            y,
            gauge.space.name
        )));
    }
    let mut out: BTreeMap<Exponents, Rat> = BTreeMap::new();
    let mut truncated = false;
    let mut k: u32 = 0;
    loop {
        if n >= 0 && k as i64 > n {
            break;
        }
        let spent = step * k as i64;
        if spent > budget {
            truncated = true;
            break;
        }
        let sign = if (n - k as i64).rem_euclid(2) == 1 && sigma == -1 { -1 } else { 1 }
            * if k % 2 == 1 && tau == -1 { -1 } else { 1 };
        let coeff = binomial(n, k) * Rat::from_integer(sign as i128);
        let (rk, cut) = expand_power(r.vector(), k as i64, target, level + 1, gauge, budget - spent)?;
        truncated |= cut;
        for (e, c) in rk {
            let mut e = e;
            e[y.index()] += (n - k as i64) as i32;
            *out.entry(e).or_insert_with(Rat::zero) += coeff * c;
        }
        k += 1;
    }
    Ok((out.into_iter().filter(|(_, c)| !c.is_zero()).collect(), truncated))
}

fn describe_vec(x: Vec3) -> String {
    Coord::ALL
        .iter()
        .find(|c| c.vector() == x)
        .map(|c| c.name().to_string())
        .unwrap_or_else(|| format!("{}z + {}w + {}t", x[0], x[1], x[2]))
}

/// Expands a universal monomial directly into `target`, exact up to
/// `frontier` above the monomial's own order.
pub fn expand(m: &Monomial, target: &Space, frontier: i64) -> Result<Series> {
    let s = Series::monomial(m, &Space::universal(), target)?;
    s.reexpand(target, s.floor + frontier)
}

/// `e^{k·a·∂_b}`, acting on the exponent of `b` with every other coordinate
/// held fixed.
pub fn taylor_shift(s: &Series, a: Coord, k: Rat, b: Coord) -> Result<Series> {
    if k.is_zero() {
        return Ok(s.clone());
    }
    let wa = s.gauge.weights[a.index()];
    let wb = s.gauge.weights[b.index()];
    let (Some(wa), Some(wb)) = (wa, wb) else {
        return Err(Error::DivergentInTarget(format!("{a} or {b} is not a coordinate of {}", s.gauge.space.name)));
    };
    let polynomial_in_b = s.terms.keys().all(|e| e[b.index()] >= 0);
    let convergent = wa > wb;
    if !convergent && !(s.is_exact() && polynomial_in_b) {
        return Err(Error::DivergentInTarget(format!(
            "e^({a})d/d({b}) on a series in {}: infinitely many terms land below the frontier",
            s.space.name
        )));
    }
    if s.is_exact() && !polynomial_in_b {
        return taylor_shift(&s.truncate(s.floor + DEFAULT_SHIFT_FRONTIER), a, k, b);
    }
    let bound = s.frontier;
    let mut terms: BTreeMap<Exponents, Rat> = BTreeMap::new();
    for (e, c) in &s.terms {
        let m = e[b.index()] as i64;
        let base = s.gauge.omega(e)?;
        let mut n: u32 = 0;
        loop {
            if m >= 0 && n as i64 > m {
                break;
            }
            if bound.is_some_and(|bd| base + (wa - wb) * n as i64 > bd) {
                break;
            }
            let coeff = binomial(m, n) * pow_rat(k, n);
            let mut e2 = *e;
            e2[b.index()] -= n as i32;
            e2[a.index()] += n as i32;
            *terms.entry(e2).or_insert_with(Rat::zero) += c * coeff;
            n += 1;
        }
    }
    let mut out = Series { space: s.space.clone(), gauge: s.gauge.clone(), terms, floor: s.floor, frontier: bound };
    out.prune();
    Ok(out)
}

/// Frontier used when an exact series with negative powers is shifted.
const DEFAULT_SHIFT_FRONTIER: i64 = 8;

fn pow_rat(k: Rat, n: u32) -> Rat {
    (0..n).fold(Rat::one(), |acc, _| acc * k)
}

/// `V((z))((z−w))`
pub fn space_z_zw() -> Space {
    Space::tower("z;z-w", &[Coord::Z, Coord::ZW])
}

/// `V((w))((z−w))`
pub fn space_w_zw() -> Space {
    Space::tower("w;z-w", &[Coord::W, Coord::ZW])
}

/// `f(z, z−w) ↦ e^{(z−w)∂_w} f(w, z−w)`.
pub fn weird_isom(s: &Series) -> Result<Series> {
    if s.space != space_z_zw() {
        return Err(Error::TagMismatch(s.space.name.clone(), space_z_zw().name));
    }
    let renamed = s.rename(Coord::Z, Coord::W, &space_w_zw())?;
    taylor_shift(&renamed, Coord::ZW, Rat::one(), Coord::W)
}

/// Compares both sides of the isomorphism triangle on a combination of
/// monomials in `z, w, z−w`; returns the first differing coefficient.
pub fn check_weird_isom(ms: &[Monomial], frontier: i64) -> Result<Option<Exponents>> {
    for m in ms {
        if m.exponents[Coord::T.index()] != 0
            || m.exponents[Coord::ZT.index()] != 0
            || m.exponents[Coord::WT.index()] != 0
        {
            return Err(Error::NoSuchEmbedding(format!("{m} involves t")));
        }
    }
    let left_space = space_z_zw();
    let right_space = space_w_zw();
    let left = Series::universal(ms, &left_space)?;
    let right = Series::universal(ms, &right_space)?;
    let base = ms.iter().map(|m| Gauge::new(&right_space).omega(&m.exponents)).collect::<Result<Vec<_>>>()?;
    let bound = base.iter().copied().min().unwrap_or(0) + frontier;
    let via_shift = weird_isom(&left.reexpand(&left_space, bound)?)?;
    let direct = right.reexpand(&right_space, bound)?;
    via_shift.first_difference(&direct)
}

#[allow(non_snake_case)]
pub mod spaces {
    //! The named spaces of the star and octagon diagrams.
    use super::{Coord::*, Space};

    pub fn universal() -> Space {
        Space::universal()
    }

    // mixed spaces
    pub fn i_jkl() -> Space {
        Space::new("i(jkl)", vec![vec![Z], vec![W, T, WT]])
    }
    pub fn ij_kl() -> Space {
        Space::new("ij(kl)", vec![vec![Z, W, ZW], vec![T]])
    }
    pub fn i_jk_l() -> Space {
        Space::new("i(jk)l", vec![vec![Z, T, ZT], vec![WT]])
    }
    pub fn sq_ij_k_l() -> Space {
        Space::new("[(ij)k]l", vec![vec![W, T, WT], vec![ZW]])
    }
    pub fn ijk_l() -> Space {
        Space::new("(ijk)l", vec![vec![T], vec![ZW, ZT, WT]])
    }
    pub fn j_ki_l() -> Space {
        Space::new("j(ki)l", vec![vec![Z, W, ZW], vec![ZT]])
    }
    pub fn j_sq_ik_l() -> Space {
        Space::new("j([ik]l)", vec![vec![W], vec![Z, T, ZT]])
    }
    pub fn j_ik_l() -> Space {
        Space::new("j(ik)l", vec![vec![W, T, WT], vec![ZT]])
    }
    pub fn sq_ij_k() -> Space {
        Space::new("([ij]k)l", vec![vec![T], vec![ZW, ZT, WT]])
    }
    pub fn sq_i_jk_l() -> Space {
        Space::new("[i(jk)]l", vec![vec![Z, T, ZT], vec![WT]])
    }
    pub fn sq_jk_i_l() -> Space {
        Space::new("([jk]i)l", vec![vec![Z], vec![ZW, ZT, WT]])
    }
    pub fn sq_ik_j_l() -> Space {
        Space::new("([ik]j)l", vec![vec![W], vec![ZW, ZT, WT]])
    }
    pub fn i_kj_l() -> Space {
        Space::new("i(kj)l", vec![vec![Z, W, ZW], vec![WT]])
    }
    pub fn i_sq_jk_l() -> Space {
        Space::new("i([jk]l)", vec![vec![Z], vec![W, T, WT]])
    }

    // towers
    pub fn i_j_kl() -> Space {
        Space::tower("i(j(kl))", &[Z, W, T])
    }
    pub fn i_jk__l() -> Space {
        Space::tower("i((jk)l)", &[Z, T, WT])
    }
    pub fn ij__kl() -> Space {
        Space::tower("(ij)(kl)", &[W, T, ZW])
    }
    pub fn i_jk___l() -> Space {
        Space::tower("(i(jk))l", &[T, ZT, WT])
    }
    pub fn ij_k__l() -> Space {
        Space::tower("((ij)k)l", &[T, WT, ZW])
    }
    pub fn j_ki__l() -> Space {
        Space::tower("j((ki)l)", &[W, Z, ZT])
    }
    pub fn j_ik__l() -> Space {
        Space::tower("j((ik)l)", &[W, T, ZT])
    }
    pub fn j_ik___l() -> Space {
        Space::tower("(j(ik))l", &[T, WT, ZT])
    }
    pub fn ji_k__l() -> Space {
        Space::tower("((ji)k)l", &[T, ZT, ZW])
    }
    pub fn jk_i__l() -> Space {
        Space::tower("((jk)i)l", &[Z, ZT, WT])
    }
    pub fn j_ki___l() -> Space {
        Space::tower("(j(ki))l", &[Z, ZW, ZT])
    }
    pub fn ki_j__l() -> Space {
        Space::tower("((ki)j)l", &[W, ZW, ZT])
    }
    pub fn ik_j__l() -> Space {
        Space::tower("((ik)j)l", &[W, WT, ZT])
    }
    pub fn i_kj___l() -> Space {
        Space::tower("(i(kj))l", &[W, ZW, WT])
    }
    pub fn i_kj__l() -> Space {
        Space::tower("i((kj)l)", &[Z, W, WT])
    }
    pub fn k_ij___l() -> Space {
        Space::tower("(k(ij))l", &[W, WT, ZW])
    }
}

/// A diagram of embeddings out of the universal space: each mixed space maps
/// to a few towers, and every tower is reached along at least two routes.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub name: &'static str,
    pub towers: Vec<Space>,
    pub arrows: Vec<(Space, Vec<usize>)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagramKind {
    Star,
    Octagon1,
    Octagon2,
}

impl FromStr for DiagramKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<DiagramKind> {
        match s {
            "star" => Ok(DiagramKind::Star),
            "octagon-1" | "octagon1" => Ok(DiagramKind::Octagon1),
            "octagon-2" | "octagon2" => Ok(DiagramKind::Octagon2),
            _ => Err(Error::Parse(format!("unknown diagram {s:?}; expected star, octagon-1 or octagon-2"))),
        }
    }
}

impl DiagramKind {
    pub const ALL: [DiagramKind; 3] = [DiagramKind::Star, DiagramKind::Octagon1, DiagramKind::Octagon2];

    pub fn name(self) -> &'static str {
        match self {
            DiagramKind::Star => "star",
            DiagramKind::Octagon1 => "octagon-1",
            DiagramKind::Octagon2 => "octagon-2",
        }
    }

    pub fn diagram(self) -> Diagram {
        use spaces::*;
        let name = self.name();
        match self {
            DiagramKind::Star => Diagram {
                name,
                towers: vec![i_j_kl(), i_jk__l(), ij__kl(), i_jk___l(), ij_k__l()],
                arrows: vec![
                    (i_jkl(), vec![0, 1]),
                    (ij_kl(), vec![0, 2]),
                    (i_jk_l(), vec![1, 3]),
                    (sq_ij_k_l(), vec![2, 4]),
                    (ijk_l(), vec![3, 4]),
                ],
            },
            DiagramKind::Octagon1 => Diagram {
                name,
                towers: vec![j_ki__l(), j_ik__l(), j_ik___l(), ji_k__l(), ij_k__l(), i_jk___l(), jk_i__l(), j_ki___l()],
                arrows: vec![
                    (j_ki_l(), vec![0, 7]),
                    (j_sq_ik_l(), vec![0, 1]),
                    (j_ik_l(), vec![1, 2]),
                    (sq_ij_k(), vec![2, 3]),
                    (sq_ij_k(), vec![3, 4]),
                    (sq_ij_k(), vec![4, 5]),
                    (sq_i_jk_l(), vec![5, 6]),
                    (sq_jk_i_l(), vec![6, 7]),
                ],
            },
            DiagramKind::Octagon2 => Diagram {
                name,
                towers: vec![ki_j__l(), ik_j__l(), i_kj___l(), i_kj__l(), i_jk__l(), i_jk___l(), ij_k__l(), k_ij___l()],
                arrows: vec![
                    (sq_ik_j_l(), vec![7, 0]),
                    (sq_ik_j_l(), vec![0, 1]),
                    (sq_ik_j_l(), vec![1, 2]),
                    (i_kj_l(), vec![2, 3]),
                    (i_sq_jk_l(), vec![3, 4]),
                    (i_jk_l(), vec![4, 5]),
                    (sq_ij_k(), vec![5, 6]),
                    (sq_ij_k_l(), vec![6, 7]),
                ],
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathMismatch {
    pub tower: String,
    pub left: String,
    pub right: String,
    pub exponents: Exponents,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramReport {
    pub diagram: &'static str,
    pub comparisons: usize,
    pub mismatch: Option<PathMismatch>,
}

impl DiagramReport {
    pub fn ok(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Expands `m` along every route to every tower and compares the routes
/// coefficientwise up to `frontier` above the monomial's order.
pub fn verify_diagram(kind: DiagramKind, m: &Monomial, frontier: i64) -> Result<DiagramReport> {
    let d = kind.diagram();
    let mut comparisons = 0;
    for (t, tower) in d.towers.iter().enumerate() {
        let start = Series::monomial(m, &Space::universal(), tower)?;
        let bound = start.floor() + frontier;
        let mut routes: Vec<(String, Series)> = Vec::new();
        for (mixed, targets) in &d.arrows {
            if !targets.contains(&t) {
                continue;
            }
            let through = start.reexpand(mixed, bound)?;
            let landed = through.reexpand(tower, bound)?;
            routes.push((mixed.name.clone(), landed));
        }
        for pair in routes.windows(2) {
            comparisons += 1;
            if let Some(e) = pair[0].1.first_difference(&pair[1].1)? {
                return Ok(DiagramReport {
                    diagram: d.name,
                    comparisons,
                    mismatch: Some(PathMismatch {
                        tower: tower.name.clone(),
                        left: pair[0].0.clone(),
                        right: pair[1].0.clone(),
                        exponents: e,
                    }),
                });
            }
        }
    }
    Ok(DiagramReport { diagram: d.name, comparisons, mismatch: None })
}
