//! Exact rational polynomials and certified real-root isolation.
//!
//! Roots are isolated with Sturm sequences over exact rationals, refined by
//! bisection on dyadic midpoints, and grouped by multiplicity through a
//! square-free decomposition.

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Default absolute width of the isolating intervals.
pub const DEFAULT_ROOT_TOL: f64 = 1e-13;

/// Polynomial with exact rational coefficients in ascending degree order.
///
/// The coefficient vector never carries trailing zeros; the zero polynomial
/// has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.to_f64_coeffs().iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => Self::zero(),
        }
    }

    /// Divides by the absolute value of the leading coefficient. Signs of
    /// values are preserved.
    fn normalized(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&lc.abs().recip()),
            None => Self::zero(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero);
                    let b = other.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let factor = &rem[k + dd] / &lc;
            if !factor.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &factor * d;
                }
            }
            quot[k] = factor;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.normalized();
        }
        a.monic()
    }

    /// Square-free decomposition `p = c · Π f_i^i` (Yun). Returns the
    /// non-constant factors with their multiplicities.
    pub fn square_free_factors(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let dp = self.derivative();
        let a0 = self.gcd(&dp);
        let mut b = self.div_rem(&a0).0;
        let mut c = dp.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut mult = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.monic(), mult));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            mult += 1;
        }
        out
    }

    /// Sturm sequence `p, p', -rem(p, p'), …`, each member scaled by a positive constant.
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.normalized()];
        let d = self.derivative();
        if d.is_zero() {
            return seq;
        }
        seq.push(d.normalized());
        loop {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(r.normalized().scale(&-BigRational::one()));
        }
        seq
    }

    /// Number of distinct real roots.
    pub fn real_root_count(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        let seq = self.sturm_sequence();
        sign_changes_at_infinity(&seq, false) - sign_changes_at_infinity(&seq, true)
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "{}a", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}a^{k}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

fn count_sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

fn sign_of(x: &BigRational) -> i8 {
    match x.cmp(&BigRational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

fn sign_changes_at(seq: &[RationalPoly], x: &BigRational) -> usize {
    count_sign_changes(seq.iter().map(|p| sign_of(&p.eval(x))))
}

fn sign_changes_at_infinity(seq: &[RationalPoly], positive: bool) -> usize {
    count_sign_changes(seq.iter().map(|p| {
        let lc = sign_of(p.leading().expect("Sturm members are nonzero"));
        let odd = p.degree().unwrap_or(0) % 2 == 1;
        if !positive && odd {
            -lc
        } else {
            lc
        }
    }))
}

/// Sorted real roots with their multiplicities and isolating intervals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSet {
    pub roots: Vec<f64>,
    pub multiplicities: Vec<u32>,
    /// Closed intervals `[lo, hi]` each containing exactly one root.
    pub intervals: Vec<(f64, f64)>,
    pub certified_tolerance: f64,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// Exact isolating interval for one simple root of a square-free factor.
struct Isolated {
    lo: BigRational,
    hi: BigRational,
}

fn dyadic_upper_bound(p: &RationalPoly) -> BigRational {
    // Cauchy bound 1 + max |a_k / a_n|, rounded up to a power of two so that
    // all bisection midpoints stay dyadic.
    let lc = p.leading().expect("nonzero").abs();
    let mut bound = BigRational::one();
    for c in &p.coeffs[..p.coeffs.len() - 1] {
        let r = c.abs() / &lc;
        if r > bound {
            bound = r;
        }
    }
    bound += BigRational::one();
    let mut pow = BigRational::one();
    while pow < bound {
        pow *= BigRational::from_integer(BigInt::from(2));
    }
    pow
}

fn isolate(p: &RationalPoly, seq: &[RationalPoly]) -> Vec<Isolated> {
    let bound = dyadic_upper_bound(p);
    let two = BigRational::from_integer(BigInt::from(2));
    // Stack of half-open intervals (lo, hi] with their Sturm counts at the ends.
    let lo = -bound.clone();
    let v_lo = sign_changes_at(seq, &lo);
    let v_hi = sign_changes_at(seq, &bound);
    let mut stack = vec![(lo, v_lo, bound, v_hi)];
    let mut out = Vec::new();
    while let Some((lo, v_lo, hi, v_hi)) = stack.pop() {
        let count = v_lo - v_hi;
        match count {
            0 => {}
            1 => out.push(Isolated { lo, hi }),
            _ => {
                let mid = (&lo + &hi) / &two;
                let v_mid = sign_changes_at(seq, &mid);
                stack.push((lo, v_lo, mid.clone(), v_mid));
                stack.push((mid, v_mid, hi, v_hi));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Shrinks `(lo, hi]` containing one simple root of `p` to width `≤ tol`.
fn refine(p: &RationalPoly, seq: &[RationalPoly], iso: Isolated, tol: &BigRational) -> Isolated {
    let two = BigRational::from_integer(BigInt::from(2));
    let Isolated { mut lo, mut hi } = iso;
    if p.eval(&hi).is_zero() {
        return Isolated { lo: hi.clone(), hi };
    }
    // The left end may be a root belonging to the neighbouring interval; move
    // it inward with Sturm counts until p(lo) ≠ 0.
    while p.eval(&lo).is_zero() {
        let mid = (&lo + &hi) / &two;
        if p.eval(&mid).is_zero() {
            return Isolated { lo: mid.clone(), hi: mid };
        }
        if sign_changes_at(seq, &lo) - sign_changes_at(seq, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let s_lo = sign_of(&p.eval(&lo));
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        let s_mid = sign_of(&p.eval(&mid));
        if s_mid == 0 {
            return Isolated { lo: mid.clone(), hi: mid };
        }
        if s_mid == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Isolated { lo, hi }
}

/// All real roots of `p`, each isolated to an interval of width at most `tol`.
pub fn poly_real_roots(p: &RationalPoly, tol: f64) -> Result<RootSet> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::invalid(format!("root tolerance must be positive, got {tol}")));
    }
    let tol_q = BigRational::from_float(tol).expect("finite tolerance");
    let mut found: Vec<(BigRational, BigRational, u32)> = Vec::new();
    for (factor, mult) in p.square_free_factors() {
        let seq = factor.sturm_sequence();
        for iso in isolate(&factor, &seq) {
            let r = refine(&factor, &seq, iso, &tol_q);
            found.push((r.lo, r.hi, mult));
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    let two = BigRational::from_integer(BigInt::from(2));
    let mut set = RootSet {
        roots: Vec::with_capacity(found.len()),
        multiplicities: Vec::with_capacity(found.len()),
        intervals: Vec::with_capacity(found.len()),
        certified_tolerance: tol,
    };
    for (lo, hi, mult) in found {
        let mid = (&lo + &hi) / &two;
        set.roots.push(mid.to_f64().unwrap_or(f64::NAN));
        set.intervals
            .push((lo.to_f64().unwrap_or(f64::NAN), hi.to_f64().unwrap_or(f64::NAN)));
        set.multiplicities.push(mult);
    }
    Ok(set)
}
