//! Exact arithmetic in `ℚ(ζ_N)`.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The root of unity `ζ_N^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CycValue {
    order: u32,
    exponent: u32,
}

impl CycValue {
    pub fn new(order: u32, exponent: i64) -> Self {
        assert!(order >= 1, "root of unity order must be positive");
        CycValue { order, exponent: exponent.rem_euclid(order as i64) as u32 }
    }

    pub fn one(order: u32) -> Self {
        Self::new(order, 0)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn inv(self) -> Self {
        Self::new(self.order, -(self.exponent as i64))
    }

    /// `self^sign` for `sign = ±1`.
    pub fn pow_sign(self, sign: i8) -> Self {
        if sign < 0 {
            self.inv()
        } else {
            self
        }
    }

    pub fn to_complex(self) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * self.exponent as f64 / self.order as f64;
        Complex64::from_polar(1.0, theta)
    }
}

impl Mul for CycValue {
    type Output = CycValue;

    fn mul(self, rhs: CycValue) -> CycValue {
        assert_eq!(self.order, rhs.order, "mixed root of unity orders");
        Self::new(self.order, self.exponent as i64 + rhs.exponent as i64)
    }
}

impl fmt::Display for CycValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ζ{}^{}", self.order, self.exponent)
    }
}

/// The `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut p: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    p[0] = -BigInt::one();
    p[n] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = exact_divide(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

/// Quotient of integer polynomials when the divisor is monic and divides.
fn exact_divide(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[i - dd + j] -= &c * dj;
        }
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Remainder modulo a monic polynomial, padded to `len`.
fn reduce_mod(poly: &mut Vec<BigInt>, modulus: &[BigInt], len: usize) {
    let dm = modulus.len() - 1;
    for i in (dm..poly.len()).rev() {
        let c = std::mem::take(&mut poly[i]);
        if c.is_zero() {
            continue;
        }
        for (j, mj) in modulus.iter().enumerate().take(dm) {
            poly[i - dm + j] -= &c * mj;
        }
    }
    poly.truncate(dm);
    poly.resize(len, BigInt::zero());
}

/// `(Σ cᵢ ζ_Nⁱ) / q`, kept reduced modulo the `N`-th cyclotomic polynomial
/// (so only the first `φ(N)` coefficients can be nonzero) with
/// `gcd(c, q) = 1` and `q > 0`.
#[derive(Clone, Debug)]
pub struct CyclotomicSum {
    order: usize,
    coeffs: Vec<BigInt>,
    denom: BigInt,
}

impl CyclotomicSum {
    /// Builds and normalizes. `coeffs` may have any length; index `i` is
    /// the coefficient of `ζ_N^(i mod N)`.
    pub fn new(order: usize, coeffs: Vec<BigInt>, denom: BigInt) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        assert!(!denom.is_zero(), "zero denominator");
        let mut folded = vec![BigInt::zero(); order];
        for (i, c) in coeffs.into_iter().enumerate() {
            folded[i % order] += c;
        }
        let mut s = CyclotomicSum { order, coeffs: folded, denom };
        s.normalize();
        s
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, vec![], BigInt::one())
    }

    pub fn one(order: usize) -> Self {
        Self::from_rational(&BigRational::one(), order)
    }

    pub fn from_rational(r: &BigRational, order: usize) -> Self {
        Self::new(order, vec![r.numer().clone()], r.denom().clone())
    }

    /// `Σ_k counts[k] ζ_N^k / denom`.
    pub fn from_exponent_counts(order: usize, counts: &[u64], denom: BigInt) -> Self {
        Self::new(order, counts.iter().map(|&c| BigInt::from(c)).collect(), denom)
    }

    fn normalize(&mut self) {
        let phi = cyclotomic_polynomial(self.order);
        reduce_mod(&mut self.coeffs, &phi, self.order);
        if self.denom.is_negative() {
            self.denom = -std::mem::take(&mut self.denom);
            for c in &mut self.coeffs {
                *c = -std::mem::take(c);
            }
        }
        if self.coeffs.iter().all(Zero::is_zero) {
            self.denom = BigInt::one();
            return;
        }
        let g = self.coeffs.iter().fold(self.denom.clone(), |g, c| g.gcd(c));
        if !g.is_one() {
            for c in &mut self.coeffs {
                *c /= &g;
            }
            self.denom /= &g;
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    /// The same value written over `ζ_m`, `N | m`.
    pub fn lift(&self, m: usize) -> Self {
        assert_eq!(m % self.order, 0, "lift target must be a multiple of the order");
        let step = m / self.order;
        let mut coeffs = vec![BigInt::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * step] = c.clone();
        }
        Self::new(m, coeffs, self.denom.clone())
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let l = self.order.lcm(&other.order);
        (self.lift(l), other.lift(l))
    }

    /// The value as a rational, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.coeffs[0].clone(), self.denom.clone()))
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn to_complex(&self) -> Complex64 {
        let q = self.denom.to_f64().unwrap_or(f64::INFINITY);
        let mut z = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN);
            z += CycValue::new(self.order as u32, i as i64).to_complex() * c;
        }
        z / q
    }

    /// Decimal rendering of the complex value.
    pub fn decimal(&self) -> String {
        let z = self.to_complex();
        let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
        let (re, im) = (clean(z.re), clean(z.im));
        if im == 0.0 {
            format!("{re:.12}")
        } else {
            format!("{re:.12}{}{:.12}i", if im < 0.0 { "-" } else { "+" }, im.abs())
        }
    }
}

impl PartialEq for CyclotomicSum {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs && self.denom == other.denom;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs && a.denom == b.denom
    }
}

impl Eq for CyclotomicSum {}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for &CyclotomicSum {
    type Output = CyclotomicSum;

    fn add(self, rhs: &CyclotomicSum) -> CyclotomicSum {
        let (a, b) = self.common(rhs);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x * &b.denom + y * &a.denom).collect();
        CyclotomicSum::new(a.order, coeffs, &a.denom * &b.denom)
    }
}

impl Mul for &CyclotomicSum {
    type Output = CyclotomicSum;

    fn mul(self, rhs: &CyclotomicSum) -> CyclotomicSum {
        let (a, b) = self.common(rhs);
        let n = a.order;
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                coeffs[(i + j) % n] += x * y;
            }
        }
        CyclotomicSum::new(n, coeffs, &a.denom * &b.denom)
    }
}

impl fmt::Display for CyclotomicSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.order)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            write!(f, "{}{c}", if i == 0 { " " } else { "," })?;
        }
        write!(f, ")/{}", self.denom)
    }
}

/// `p/q` with the denominator always written, `1/1` included.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), big(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), big(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), big(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), big(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), big(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for n in 2..10 {
            let s = CyclotomicSum::new(n, vec![BigInt::one(); n], BigInt::one());
            assert!(s.is_zero(), "n = {n}: {s}");
        }
    }

    #[test]
    fn normalization_and_display() {
        let s = CyclotomicSum::new(2, big(&[32, 0]), BigInt::from(64));
        assert_eq!(s.to_string(), "(2; 1,0)/2");
        assert_eq!(s.as_rational(), Some(BigRational::new(1.into(), 2.into())));
        // 1 + ζ₃ = -ζ₃²
        let a = CyclotomicSum::new(3, big(&[1, 1, 0]), BigInt::one());
        let b = CyclotomicSum::new(3, big(&[0, 0, -1]), BigInt::one());
        assert_eq!(a, b);
        assert_eq!(CyclotomicSum::zero(5).to_string(), "(5; 0,0,0,0,0)/1");
    }

    #[test]
    fn comparison_across_orders() {
        // ζ₂ = ζ₄² = -1
        let a = CyclotomicSum::new(2, big(&[0, 1]), BigInt::one());
        let b = CyclotomicSum::new(4, big(&[0, 0, 1, 0]), BigInt::one());
        assert_eq!(a, b);
        assert_eq!(CyclotomicSum::one(3), CyclotomicSum::one(7));
        assert_ne!(a, CyclotomicSum::one(4));
    }

    #[test]
    fn ring_operations_match_floating_point() {
        let a = CyclotomicSum::new(5, big(&[3, -1, 4, 1, -5]), BigInt::from(7));
        let b = CyclotomicSum::new(3, big(&[2, 0, -9]), BigInt::from(4));
        let (za, zb) = (a.to_complex(), b.to_complex());
        assert!(((&a + &b).to_complex() - (za + zb)).norm() < 1e-9);
        assert!(((&a * &b).to_complex() - za * zb).norm() < 1e-9);
        assert_eq!(&a * &CyclotomicSum::one(5), a);
    }

    #[test]
    fn root_arithmetic_matches_complex() {
        for n in 1..=12u32 {
            for a in 0..n as i64 {
                for b in 0..n as i64 {
                    let x = CycValue::new(n, a);
                    let y = CycValue::new(n, b);
                    let exact = (x * y).to_complex();
                    assert!((exact - x.to_complex() * y.to_complex()).norm() < 1e-12);
                    assert!(((x * x.inv()).to_complex() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rational_format_keeps_unit_denominator() {
        assert_eq!(format_rational(&BigRational::one()), "1/1");
        assert_eq!(format_rational(&BigRational::new(2.into(), 4.into())), "1/2");
    }

    #[test]
    fn decimal_rendering() {
        let i = CyclotomicSum::new(4, big(&[0, 1]), BigInt::one());
        assert_eq!(i.decimal(), "0.000000000000+1.000000000000i");
        assert_eq!(CyclotomicSum::from_rational(&BigRational::new(1.into(), 2.into()), 2).decimal(), "0.500000000000");
    }
}
