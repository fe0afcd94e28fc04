//! Exact arithmetic in cyclotomic fields Q(ζ_N) = Q[x]/Φ_N(x).
//!
//! A [`Cyclo`] stores its conductor `N` and the coefficients of
//! 1, ζ, …, ζ^{φ(N)-1}. Values that happen to be rational are always stored
//! with conductor 1, which keeps mixed rational/cyclotomic arithmetic cheap.
//! Operands with different conductors are coerced into Q(ζ_lcm).

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::rc::Rc;
use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::rational::Rational;

/// Default upper bound on conductors.
pub const DEFAULT_CONDUCTOR_CEILING: u32 = 64;

static CEILING: AtomicU32 = AtomicU32::new(DEFAULT_CONDUCTOR_CEILING);

/// Set the largest conductor that constructors and coercions accept.
pub fn set_conductor_ceiling(n: u32) {
    CEILING.store(n.max(1), Ordering::Relaxed);
}

pub fn conductor_ceiling() -> u32 {
    CEILING.load(Ordering::Relaxed)
}

pub(crate) fn check_conductor(n: u32) -> Result<()> {
    let ceiling = conductor_ceiling();
    if n == 0 || n > ceiling {
        return Err(Error::ConductorOverflow { requested: n, ceiling });
    }
    Ok(())
}

pub fn euler_phi(n: u32) -> usize {
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out as usize
}

fn mobius(n: u32) -> i32 {
    let mut m = n;
    let mut k = 0;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            k += 1;
        }
        p += 1;
    }
    if m > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic polynomial with zero remainder.
fn poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let dq = rem.len() - 1 - db;
    let mut q = vec![BigInt::zero(); dq + 1];
    for k in (0..=dq).rev() {
        let c = rem[k + db].clone();
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[k + j] -= &c * bj;
            }
        }
        q[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

/// Coefficients (constant term first) of the N-th cyclotomic polynomial,
/// computed as the Möbius product of the factors x^d - 1.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for d in 1..=n {
        if !n.is_multiple_of(d) {
            continue;
        }
        let mut f = vec![BigInt::zero(); d as usize + 1];
        f[0] = BigInt::from(-1);
        f[d as usize] = BigInt::one();
        match mobius(n / d) {
            1 => num = poly_mul(&num, &f),
            -1 => den = poly_mul(&den, &f),
            _ => {}
        }
    }
    poly_div_exact(&num, &den)
}

struct Ctx {
    phi: usize,
    /// `red[k]` holds the coefficients of x^k mod Φ_N.
    red: Vec<Vec<i64>>,
}

impl Ctx {
    fn new(n: u32) -> Ctx {
        let phi = euler_phi(n);
        let poly = cyclotomic_polynomial(n);
        let poly: Vec<i64> = poly.iter().map(|c| i64::try_from(c).expect("cyclotomic coefficient")).collect();
        let len = (n as usize).max(2 * phi);
        let mut red = Vec::with_capacity(len);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..len {
            red.push(cur.clone());
            let top = cur[phi - 1];
            let mut next = vec![0i64; phi];
            for j in (1..phi).rev() {
                next[j] = cur[j - 1];
            }
            if top != 0 {
                for j in 0..phi {
                    next[j] = next[j]
                        .checked_sub(top.checked_mul(poly[j]).expect("reduction overflow"))
                        .expect("reduction overflow");
                }
            }
            cur = next;
        }
        Ctx { phi, red }
    }
}

thread_local! {
    static CTXS: RefCell<HashMap<u32, Rc<Ctx>>> = RefCell::new(HashMap::new());
}

fn ctx(n: u32) -> Rc<Ctx> {
    CTXS.with(|m| m.borrow_mut().entry(n).or_insert_with(|| Rc::new(Ctx::new(n))).clone())
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// Element of Q(ζ_N) in the power basis.
#[derive(Clone, Debug)]
pub struct Cyclo {
    n: u32,
    c: Vec<Rational>,
}

impl Cyclo {
    pub fn rational(r: Rational) -> Self {
        Cyclo { n: 1, c: vec![r] }
    }

    pub fn from_int(k: i64) -> Self {
        Cyclo::rational(Rational::from_int(k))
    }

    /// ζ_N^k.
    pub fn zeta_pow(n: u32, k: i64) -> Result<Self> {
        check_conductor(n)?;
        let k = k.rem_euclid(n as i64) as usize;
        let cx = ctx(n);
        let c = cx.red[k].iter().map(|&v| Rational::from_int(v)).collect();
        Ok(Cyclo { n, c }.normalized())
    }

    pub fn zeta(n: u32) -> Result<Self> {
        Cyclo::zeta_pow(n, 1)
    }

    /// Build from coefficients of powers of ζ_N (any length); the list is
    /// reduced modulo Φ_N.
    pub fn from_coeffs(n: u32, coeffs: &[Rational]) -> Result<Self> {
        check_conductor(n)?;
        let cx = ctx(n);
        let mut c = vec![Rational::zero(); cx.phi];
        for (k, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let row = &cx.red[k % n as usize];
            for (j, &r) in row.iter().enumerate() {
                if r != 0 {
                    c[j] += &(a * &Rational::from_int(r));
                }
            }
        }
        Ok(Cyclo { n, c }.normalized())
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Power-basis coefficients at the stored conductor.
    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    fn normalized(mut self) -> Self {
        if self.n != 1 && self.c[1..].iter().all(|x| x.is_zero()) {
            self.n = 1;
            self.c.truncate(1);
        }
        self
    }

    /// Re-express in Q(ζ_m); requires `n | m`.
    fn lift(&self, m: u32) -> Self {
        if self.n == m {
            return self.clone();
        }
        let cx = ctx(m);
        let step = (m / self.n) as usize;
        let mut c = vec![Rational::zero(); cx.phi];
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &r) in cx.red[k * step].iter().enumerate() {
                if r != 0 {
                    c[j] += &(a * &Rational::from_int(r));
                }
            }
        }
        Cyclo { n: m, c }
    }

    /// Coerce into Q(ζ_m) with `m` a multiple of the conductor, honouring the ceiling.
    pub fn coerce(&self, m: u32) -> Result<Self> {
        if !m.is_multiple_of(self.n) {
            return Err(Error::pre(format!("conductor {} does not divide {m}", self.n)));
        }
        check_conductor(m)?;
        Ok(self.lift(m))
    }

    fn common(a: &Cyclo, b: &Cyclo) -> u32 {
        let m = lcm(a.n, b.n);
        if let Err(e) = check_conductor(m) {
            panic!("{e}");
        }
        m
    }

    pub fn try_add(&self, o: &Cyclo) -> Result<Cyclo> {
        check_conductor(lcm(self.n, o.n))?;
        Ok(self.clone() + o)
    }

    pub fn try_mul(&self, o: &Cyclo) -> Result<Cyclo> {
        check_conductor(lcm(self.n, o.n))?;
        Ok(self.mul_ref(o))
    }

    fn scale_rat(&self, r: &Rational) -> Cyclo {
        if r.is_zero() {
            return Cyclo::from_int(0);
        }
        Cyclo { n: self.n, c: self.c.iter().map(|x| x * r).collect() }
    }

    fn mul_same(&self, o: &Cyclo) -> Cyclo {
        let cx = ctx(self.n);
        let phi = cx.phi;
        let mut prod = vec![Rational::zero(); 2 * phi - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += &(a * b);
                }
            }
        }
        let mut c: Vec<Rational> = prod[..phi].to_vec();
        for (k, p) in prod.iter().enumerate().skip(phi) {
            if p.is_zero() {
                continue;
            }
            for (j, &r) in cx.red[k].iter().enumerate() {
                if r != 0 {
                    c[j] += &(p * &Rational::from_int(r));
                }
            }
        }
        Cyclo { n: self.n, c }.normalized()
    }

    /// Multiplicative inverse by solving the linear system of multiplication-by-self.
    fn inverse(&self) -> Option<Cyclo> {
        if self.is_rational() {
            return self.c[0].recip().map(Cyclo::rational);
        }
        let cx = ctx(self.n);
        let phi = cx.phi;
        // Column j of the multiplication matrix is self * ζ^j.
        let mut m = vec![vec![Rational::zero(); phi + 1]; phi];
        for j in 0..phi {
            let zj = Cyclo { n: self.n, c: cx.red[j].iter().map(|&v| Rational::from_int(v)).collect() };
            let col = self.mul_same(&zj).lift(self.n);
            for i in 0..phi {
                m[i][j] = col.c[i].clone();
            }
        }
        m[0][phi] = Rational::one();
        for col in 0..phi {
            let piv = (col..phi).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            let inv = m[col][col].recip()?;
            for x in m[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..phi {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for k in col..=phi {
                        let t = &f * &m[col][k];
                        m[r][k] -= &t;
                    }
                }
            }
        }
        let c = (0..phi).map(|i| m[i][phi].clone()).collect();
        Some(Cyclo { n: self.n, c }.normalized())
    }

    fn conjugate(&self) -> Cyclo {
        if self.is_rational() {
            return self.clone();
        }
        let cx = ctx(self.n);
        let n = self.n as usize;
        let mut c = vec![Rational::zero(); cx.phi];
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &r) in cx.red[(n - k) % n].iter().enumerate() {
                if r != 0 {
                    c[j] += &(a * &Rational::from_int(r));
                }
            }
        }
        Cyclo { n: self.n, c }.normalized()
    }

    /// Floating-point approximation, for display only.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, a) in self.c.iter().enumerate() {
            let t = 2.0 * std::f64::consts::PI * k as f64 / self.n as f64;
            re += a.to_f64() * t.cos();
            im += a.to_f64() * t.sin();
        }
        (re, im)
    }

    /// Sign of a real element, decided exactly.
    pub fn sign_of_real(&self) -> Result<i8> {
        if self.is_rational() {
            return Ok(self.c[0].signum());
        }
        if self.conjugate() != *self {
            return Err(Error::NotReal);
        }
        // Floating point is trusted only far away from zero.
        let mut approx = 0.0;
        let mut weight = 0.0;
        let mut finite = true;
        for (k, a) in self.c.iter().enumerate() {
            let v = a.to_f64();
            finite &= v.is_finite();
            approx += v * (2.0 * std::f64::consts::PI * k as f64 / self.n as f64).cos();
            weight += v.abs();
        }
        if finite && approx.abs() > 1e-9 * weight.max(1e-300) {
            return Ok(if approx > 0.0 { 1 } else { -1 });
        }
        let mut bits = 64;
        while bits <= 1 << 14 {
            let (lo, hi) = real_part_interval(self, bits);
            if lo.is_positive() {
                return Ok(1);
            }
            if hi.is_negative() {
                return Ok(-1);
            }
            bits *= 2;
        }
        Err(Error::Invariant("sign of a nonzero real cyclotomic number not resolved".into()))
    }
}

fn round_down(x: &BigRational, bits: u32) -> BigRational {
    let s = BigInt::one() << bits;
    BigRational::new((x * BigRational::from_integer(s.clone())).floor().to_integer(), s)
}

fn round_up(x: &BigRational, bits: u32) -> BigRational {
    let s = BigInt::one() << bits;
    BigRational::new((x * BigRational::from_integer(s.clone())).ceil().to_integer(), s)
}

/// Enclosure of atan(1/m) by partial sums of the alternating series.
fn atan_inv(m: i64, bits: u32) -> (BigRational, BigRational) {
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (bits + 8));
    let m2 = BigInt::from(m * m);
    let mut pow = BigInt::from(m);
    let mut sum = BigRational::zero();
    let mut j: i64 = 0;
    loop {
        let term = BigRational::new(BigInt::one(), &pow * BigInt::from(2 * j + 1));
        if j % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        let next = BigRational::new(BigInt::one(), &pow * &m2 * BigInt::from(2 * j + 3));
        if next < eps {
            // The true value lies between this partial sum and the next one.
            let other = if j % 2 == 0 { &sum - &next } else { &sum + &next };
            return if sum < other { (sum, other) } else { (other, sum) };
        }
        pow *= &m2;
        j += 1;
    }
}

fn pi_interval(bits: u32) -> (BigRational, BigRational) {
    let (a_lo, a_hi) = atan_inv(5, bits);
    let (b_lo, b_hi) = atan_inv(239, bits);
    let sixteen = BigRational::from_integer(BigInt::from(16));
    let four = BigRational::from_integer(BigInt::from(4));
    (&sixteen * &a_lo - &four * &b_hi, &sixteen * &a_hi - &four * &b_lo)
}

/// Enclosure of cos(x) for an exact rational 0 <= x <= 4.
fn cos_point(x: &BigRational, bits: u32) -> (BigRational, BigRational) {
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (bits + 8));
    let x2 = x * x;
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    let mut j: i64 = 0;
    loop {
        if j % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        let next = &term * &x2 / BigRational::from_integer(BigInt::from((2 * j + 1) * (2 * j + 2)));
        // From the second term on the magnitudes decrease, so the first
        // omitted term bounds the tail.
        if j >= 1 && next < eps {
            return (&sum - &next, &sum + &next);
        }
        term = next;
        j += 1;
    }
}

fn cos_enclosure(n: u32, k: usize, bits: u32) -> (BigRational, BigRational) {
    let n = n as usize;
    let k = k % n;
    let k = k.min(n - k);
    let one = BigRational::one();
    if k == 0 {
        return (one.clone(), one);
    }
    if 2 * k == n {
        return (-one.clone(), -one);
    }
    if 4 * k == n {
        return (BigRational::zero(), BigRational::zero());
    }
    let (p_lo, p_hi) = pi_interval(bits + 8);
    let scale = BigRational::new(BigInt::from(2 * k), BigInt::from(n));
    let x_lo = round_down(&(&scale * &p_lo), bits + 8);
    let x_hi = round_up(&(&scale * &p_hi), bits + 8);
    // cos is decreasing on [0, pi]; 0 < x_lo <= x_hi < pi here.
    let (lo, _) = cos_point(&x_hi, bits);
    let (_, hi) = cos_point(&x_lo, bits);
    (round_down(&lo, bits + 4), round_up(&hi, bits + 4))
}

thread_local! {
    static COS: RefCell<HashMap<(u32, usize, u32), (BigRational, BigRational)>> = RefCell::new(HashMap::new());
}

fn real_part_interval(a: &Cyclo, bits: u32) -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for (k, c) in a.c.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (cl, ch) = COS.with(|m| {
            m.borrow_mut().entry((a.n, k, bits)).or_insert_with(|| cos_enclosure(a.n, k, bits)).clone()
        });
        let c = c.to_big();
        if c.is_positive() {
            lo += &c * &cl;
            hi += &c * &ch;
        } else {
            lo += &c * &ch;
            hi += &c * &cl;
        }
    }
    (lo, hi)
}

impl PartialEq for Cyclo {
    fn eq(&self, o: &Cyclo) -> bool {
        if self.n == o.n {
            return self.c == o.c;
        }
        if self.is_rational() || o.is_rational() {
            // Normalised representations: a rational never equals a non-rational.
            return false;
        }
        let m = lcm(self.n, o.n);
        self.lift(m).c == o.lift(m).c
    }
}

impl Add<&Cyclo> for Cyclo {
    type Output = Cyclo;
    fn add(mut self, o: &Cyclo) -> Cyclo {
        if o.is_rational() {
            self.c[0] += &o.c[0];
            return self.normalized();
        }
        if self.is_rational() {
            let mut out = o.clone();
            out.c[0] += &self.c[0];
            return out.normalized();
        }
        if self.n != o.n {
            let m = Cyclo::common(&self, o);
            return self.lift(m) + &o.lift(m);
        }
        for (x, y) in self.c.iter_mut().zip(&o.c) {
            *x += y;
        }
        self.normalized()
    }
}

impl Sub<&Cyclo> for Cyclo {
    type Output = Cyclo;
    fn sub(self, o: &Cyclo) -> Cyclo {
        self + &(-o.clone())
    }
}

impl Mul<&Cyclo> for Cyclo {
    type Output = Cyclo;
    fn mul(self, o: &Cyclo) -> Cyclo {
        self.mul_ref(o)
    }
}

impl Add for Cyclo {
    type Output = Cyclo;
    fn add(self, o: Cyclo) -> Cyclo {
        self + &o
    }
}

impl Sub for Cyclo {
    type Output = Cyclo;
    fn sub(self, o: Cyclo) -> Cyclo {
        self - &o
    }
}

impl Mul for Cyclo {
    type Output = Cyclo;
    fn mul(self, o: Cyclo) -> Cyclo {
        self.mul_ref(&o)
    }
}

impl Div for Cyclo {
    type Output = Cyclo;
    fn div(self, o: Cyclo) -> Cyclo {
        self.mul_ref(&o.inverse().expect("division by zero"))
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(mut self) -> Cyclo {
        for x in self.c.iter_mut() {
            *x = -std::mem::take(x);
        }
        self
    }
}

impl AddAssign<&Cyclo> for Cyclo {
    fn add_assign(&mut self, o: &Cyclo) {
        let me = std::mem::replace(self, Cyclo::from_int(0));
        *self = me + o;
    }
}

impl SubAssign<&Cyclo> for Cyclo {
    fn sub_assign(&mut self, o: &Cyclo) {
        let me = std::mem::replace(self, Cyclo::from_int(0));
        *self = me - o;
    }
}

impl Field for Cyclo {
    fn zero() -> Self {
        Cyclo::from_int(0)
    }
    fn one() -> Self {
        Cyclo::from_int(1)
    }
    fn from_rational(r: &Rational) -> Self {
        Cyclo::rational(r.clone())
    }
    fn is_zero(&self) -> bool {
        self.is_rational() && self.c[0].is_zero()
    }
    fn is_one(&self) -> bool {
        self.is_rational() && self.c[0].is_one()
    }
    fn mul_ref(&self, o: &Self) -> Self {
        if o.is_rational() {
            return self.scale_rat(&o.c[0]);
        }
        if self.is_rational() {
            return o.scale_rat(&self.c[0]);
        }
        if self.n != o.n {
            let m = Cyclo::common(self, o);
            return self.lift(m).mul_same(&o.lift(m));
        }
        self.mul_same(o)
    }
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
    fn conj(&self) -> Self {
        self.conjugate()
    }
    fn real_sign(&self) -> Result<i8> {
        self.sign_of_real()
    }
    fn as_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.c[0].clone())
        } else {
            None
        }
    }
    fn scale(&self, r: &Rational) -> Self {
        self.scale_rat(r)
    }
    fn to_cyclo(&self) -> Cyclo {
        self.clone()
    }
}

impl From<Rational> for Cyclo {
    fn from(r: Rational) -> Self {
        Cyclo::rational(r)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.c[0]);
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let sep = if first { "" } else { " + " };
            first = false;
            match k {
                0 => write!(f, "{sep}{a}")?,
                1 => write!(f, "{sep}{a}*z{}", self.n)?,
                _ => write!(f, "{sep}{a}*z{}^{k}", self.n)?,
            }
        }
        Ok(())
    }
}

/// Wire format of a cyclotomic number.
#[derive(Serialize, Deserialize)]
struct CycloJson {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl Serialize for Cyclo {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloJson { conductor: self.n, coeffs: self.c.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclo {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CycloJson::deserialize(d)?;
        Cyclo::from_coeffs(raw.conductor, &raw.coeffs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn cyclotomic_polynomials_match_tables() {
        let as_i64 = |n| cyclotomic_polynomial(n).iter().map(|c| i64::try_from(c).unwrap()).collect::<Vec<_>>();
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(15).len() - 1, euler_phi(15));
    }

    #[test]
    fn zeta_powers_cycle() {
        for n in [3u32, 4, 5, 8, 12] {
            let z = Cyclo::zeta(n).unwrap();
            let mut acc = Cyclo::one();
            for _ in 0..n {
                acc = acc.mul_ref(&z);
            }
            assert!(acc.is_one(), "zeta_{n}^{n}");
            assert_eq!(z.conj(), Cyclo::zeta_pow(n, -1).unwrap());
        }
    }

    #[test]
    fn mixed_conductors_coerce() {
        let i = Cyclo::zeta(4).unwrap();
        let w = Cyclo::zeta(3).unwrap();
        let s = i.clone() + &w;
        assert_eq!(s.conductor(), 12);
        assert_eq!(s - &w, i);
        // ζ_6 = -ζ_3^2
        let z6 = Cyclo::zeta(6).unwrap();
        assert_eq!(z6, -Cyclo::zeta_pow(3, 2).unwrap());
    }

    #[test]
    fn inverse_round_trip() {
        let a = Cyclo::from_coeffs(5, &[q(1, 2), q(-3, 1), q(0, 1), q(2, 7)]).unwrap();
        let b = a.inv().unwrap();
        assert!(a.mul_ref(&b).is_one());
    }

    #[test]
    fn signs_of_real_elements() {
        // ζ_5 + ζ_5^{-1} = (sqrt 5 - 1)/2 > 0
        let z = Cyclo::zeta(5).unwrap();
        let r = z.clone() + &z.conj();
        assert_eq!(r.sign_of_real().unwrap(), 1);
        // ζ_5^2 + ζ_5^{-2} = (-1 - sqrt 5)/2 < 0
        let z2 = Cyclo::zeta_pow(5, 2).unwrap();
        assert_eq!((z2.clone() + &z2.conj()).sign_of_real().unwrap(), -1);
        // (2cos(2pi/5))^2 + 2cos(2pi/5) - 1 = 0 exactly
        let zero = r.mul_ref(&r) + &r - &Cyclo::one();
        assert!(zero.is_zero());
        assert_eq!(zero.sign_of_real().unwrap(), 0);
        assert_eq!(z.sign_of_real(), Err(Error::NotReal));
        // A tiny positive number: sqrt5 - 2236067977/10^9 (about 4.99e-10).
        let sqrt5 = r.scale(&q(2, 1)) + &Cyclo::one();
        let tiny = sqrt5.clone() - &Cyclo::rational(q(2236067977, 1_000_000_000));
        assert_eq!(tiny.sign_of_real().unwrap(), 1);
        let tiny_neg = sqrt5 - &Cyclo::rational(q(2236067978, 1_000_000_000));
        assert_eq!(tiny_neg.sign_of_real().unwrap(), -1);
    }

    #[test]
    fn conductor_ceiling_enforced() {
        assert!(matches!(Cyclo::zeta(1000), Err(Error::ConductorOverflow { .. })));
        let a = Cyclo::zeta(7).unwrap();
        let b = Cyclo::zeta(11).unwrap();
        assert!(matches!(a.try_mul(&b), Err(Error::ConductorOverflow { .. })));
    }

    #[test]
    fn json_round_trip() {
        let a = Cyclo::from_coeffs(8, &[q(1, 2), q(0, 1), q(-3, 4)]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"conductor":8,"coeffs":["1/2","0","-3/4","0"]}"#);
        let b: Cyclo = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
