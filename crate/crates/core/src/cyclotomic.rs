//! Exact arithmetic in the cyclotomic field `Q(ζ)` with `ζ` a primitive
//! `4r`-th root of unity.
//!
//! The field contains both `q = ζ²` (a primitive `2r`-th root) and
//! `i = ζ^r`, so every quantity of the state sum can be held exactly.
//! Elements are stored as an integer coefficient vector over a common
//! positive denominator, reduced modulo the `4r`-th cyclotomic polynomial.
//! Results that live in the subfield `Q(q)` are re-expressed as
//! [`QPolynomial`]s modulo the `2r`-th cyclotomic polynomial.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("r must be at least 3, got {0}")]
    InvalidOrder(u32),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("element is not in the subfield Q(q)")]
    NotInSubfield,
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Integer coefficients (lowest degree first) of the `n`-th cyclotomic
/// polynomial, computed as `(x^n - 1) / prod_{d | n, d < n} Φ_d`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

// Division by a monic integer polynomial that is known to be exact.
fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dc) in den.iter().enumerate() {
            rem[k + j] -= &c * dc;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

#[derive(Debug)]
struct FieldData {
    r: u32,
    order: usize,
    degree: usize,
    /// Monic modulus, lowest degree first, length `degree + 1`.
    modulus: Vec<BigInt>,
    /// `ζ^k` reduced, for `k` in `0..order`.
    powers: Vec<Vec<BigInt>>,
    /// Reduced `ζ^{2k}` for `k < totient(2r)`: the power basis of `Q(q)`.
    q_basis: Vec<Vec<BigInt>>,
}

/// The field `Q(ζ_{4r})`. Cheap to clone; all clones share one table set.
#[derive(Debug, Clone)]
pub struct CycloField(Arc<FieldData>);

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.r == other.0.r
    }
}
impl Eq for CycloField {}

impl CycloField {
    pub fn new(r: u32) -> Result<Self, FieldError> {
        if r < 3 {
            return Err(FieldError::InvalidOrder(r));
        }
        let order = 4 * r as usize;
        let modulus = cyclotomic_polynomial(order as u64);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(order);
        let mut cur = vec![BigInt::zero(); degree];
        cur[0] = BigInt::one();
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by x and fold the overflowing term
            let top = cur[degree - 1].clone();
            for k in (1..degree).rev() {
                cur[k] = cur[k - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for (k, c) in cur.iter_mut().enumerate() {
                    *c -= &top * &modulus[k];
                }
            }
        }
        let qdeg = totient(2 * r as u64) as usize;
        let q_basis = (0..qdeg).map(|k| powers[2 * k].clone()).collect();
        Ok(CycloField(Arc::new(FieldData {
            r,
            order,
            degree,
            modulus,
            powers,
            q_basis,
        })))
    }

    pub fn r(&self) -> u32 {
        self.0.r
    }

    /// Order of `ζ`, i.e. `4r`.
    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Degree of `Q(q)` over `Q`, i.e. `totient(2r)`.
    pub fn q_degree(&self) -> usize {
        self.0.q_basis.len()
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_parts(self.clone(), vec![BigInt::zero(); self.degree()], BigInt::one())
    }

    pub fn one(&self) -> FieldElement {
        self.from_integer(1)
    }

    pub fn from_integer(&self, n: i64) -> FieldElement {
        let mut v = vec![BigInt::zero(); self.degree()];
        v[0] = BigInt::from(n);
        FieldElement::from_parts(self.clone(), v, BigInt::one())
    }

    pub fn from_rational(&self, x: &BigRational) -> FieldElement {
        let mut v = vec![BigInt::zero(); self.degree()];
        v[0] = x.numer().clone();
        FieldElement::from_parts(self.clone(), v, x.denom().clone())
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> FieldElement {
        let idx = k.rem_euclid(self.order() as i64) as usize;
        FieldElement::from_parts(self.clone(), self.0.powers[idx].clone(), BigInt::one())
    }

    pub fn zeta(&self) -> FieldElement {
        self.zeta_pow(1)
    }

    /// The standard evaluation point `q = ζ²`.
    pub fn q_std(&self) -> FieldElement {
        self.zeta_pow(2)
    }

    /// `√-1 = ζ^r`.
    pub fn i_unit(&self) -> FieldElement {
        self.zeta_pow(self.r() as i64)
    }

    /// Builds an element from exact rational coefficients in the `ζ`-power
    /// basis. Longer inputs are reduced modulo the field modulus.
    pub fn from_coeffs(&self, coeffs: &[BigRational]) -> FieldElement {
        let mut acc = self.zero();
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = &acc + &(&self.zeta_pow(k as i64) * &self.from_rational(c));
        }
        acc
    }

    /// Re-expands a polynomial in `q` as a field element (`q = ζ²`).
    pub fn from_q_polynomial(&self, p: &QPolynomial) -> FieldElement {
        let mut acc = self.zero();
        for (k, c) in p.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = &acc + &(&self.zeta_pow(2 * k as i64) * &self.from_rational(c));
        }
        acc
    }

    /// Decides membership in `Q(q)` and returns the canonical polynomial.
    pub fn to_q_polynomial(&self, x: &FieldElement) -> Result<QPolynomial, FieldError> {
        assert_eq!(self, &x.field, "element from another field");
        let n = self.degree();
        let m = self.q_degree();
        // Augmented system: rows = ζ-coefficients, columns = q-basis + rhs.
        let mut rows: Vec<Vec<BigRational>> = (0..n)
            .map(|row| {
                let mut v: Vec<BigRational> = self
                    .0
                    .q_basis
                    .iter()
                    .map(|b| BigRational::from_integer(b[row].clone()))
                    .collect();
                v.push(BigRational::new(x.num[row].clone(), x.den.clone()));
                v
            })
            .collect();
        let mut pivots = Vec::with_capacity(m);
        let mut prow = 0;
        for col in 0..m {
            let Some(sel) = (prow..n).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(prow, sel);
            let inv = rows[prow][col].recip();
            for v in rows[prow].iter_mut() {
                *v = &*v * &inv;
            }
            for i in 0..n {
                if i != prow && !rows[i][col].is_zero() {
                    let f = rows[i][col].clone();
                    let pivot_row = rows[prow].clone();
                    for (x, p) in rows[i][col..=m].iter_mut().zip(&pivot_row[col..=m]) {
                        *x -= &f * p;
                    }
                }
            }
            pivots.push(col);
            prow += 1;
        }
        if rows[prow..].iter().any(|row| !row[m].is_zero()) {
            return Err(FieldError::NotInSubfield);
        }
        let mut coeffs = vec![BigRational::zero(); m];
        for (i, &col) in pivots.iter().enumerate() {
            coeffs[col] = rows[i][m].clone();
        }
        Ok(QPolynomial { coeffs: trim(coeffs) })
    }
}

/// An element of `Q(ζ_{4r})`: `num / den` with `num` the integer
/// coefficient vector in the `ζ`-power basis.
///
/// The representation is canonical (content of `num` coprime to `den`,
/// `den > 0`), so structural equality is value equality.
#[derive(Clone)]
pub struct FieldElement {
    field: CycloField,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.den == other.den && self.num == other.num
    }
}
impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement(r={}, ", self.field.r())?;
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})z^{k}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl FieldElement {
    fn from_parts(field: CycloField, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut x = FieldElement { field, num, den };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.abs();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in self.num.iter_mut() {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    /// Exact rational coefficients in the `ζ`-power basis.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// Returns the rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn scale(&self, k: &BigRational) -> FieldElement {
        let num = self.num.iter().map(|c| c * k.numer()).collect();
        FieldElement::from_parts(self.field.clone(), num, &self.den * k.denom())
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement, FieldError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.field.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm over
    /// `Q[x]` against the field modulus.
    pub fn inverse(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let a: Vec<BigRational> = self.num.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let m: Vec<BigRational> = self
            .field
            .modulus()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        // invariant: s_i * a ≡ r_i (mod m)
        let (mut r0, mut r1) = (m, trim(a));
        let (mut s0, mut s1) = (Vec::<BigRational>::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, rem) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since the modulus is irreducible
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].recip();
        let coeffs: Vec<BigRational> = s0.iter().map(|x| x * &c).collect();
        let den = coeffs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut num = vec![BigInt::zero(); self.field.degree()];
        for (k, x) in coeffs.iter().enumerate() {
            num[k] = x.numer() * (&den / x.denom());
        }
        // multiply by the original denominator: (num/den)^{-1} = den_self * inv(num)
        let num = num.into_iter().map(|c| c * &self.den).collect();
        Ok(FieldElement::from_parts(self.field.clone(), num, den))
    }

    /// The automorphism `ζ ↦ ζ^{-1}`; on the complex embedding used for
    /// numeric output it is complex conjugation.
    pub fn conj_auto(&self) -> FieldElement {
        let order = self.field.order();
        let mut num = vec![BigInt::zero(); self.field.degree()];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let img = &self.field.0.powers[(order - k) % order];
            for (acc, b) in num.iter_mut().zip(img) {
                if !b.is_zero() {
                    *acc += c * b;
                }
            }
        }
        FieldElement::from_parts(self.field.clone(), num, self.den.clone())
    }

    /// Value under the embedding `ζ ↦ e^{iπ/(2r)}` (so `q ↦ e^{iπ/r}`).
    pub fn to_complex(&self) -> Complex64 {
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let order = self.field.order() as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = 2.0 * std::f64::consts::PI * k as f64 / order;
            acc += Complex64::from_polar(ratio_f64(c, &self.den, den), angle);
        }
        acc
    }
}

fn ratio_f64(n: &BigInt, d: &BigInt, d_f64: f64) -> f64 {
    match (n.to_f64(), d_f64.is_finite()) {
        (Some(nf), true) if nf.is_finite() => nf / d_f64,
        _ => BigRational::new(n.clone(), d.clone()).to_f64().unwrap_or(f64::NAN),
    }
}

fn check_same(a: &FieldElement, b: &FieldElement) {
    assert!(a.field == b.field, "field elements from different fields");
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        check_same(self, rhs);
        if self.den == rhs.den {
            let num = self.num.iter().zip(&rhs.num).map(|(a, b)| a + b).collect();
            return FieldElement::from_parts(self.field.clone(), num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&rhs.num)
            .map(|(a, b)| a * &rhs.den + b * &self.den)
            .collect();
        FieldElement::from_parts(self.field.clone(), num, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        check_same(self, rhs);
        let d = self.field.degree();
        if self.is_zero() || rhs.is_zero() {
            return self.field.zero();
        }
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let modulus = self.field.modulus();
        for k in (d..2 * d - 1).rev() {
            let top = std::mem::take(&mut prod[k]);
            if top.is_zero() {
                continue;
            }
            for (j, mc) in modulus[..d].iter().enumerate() {
                if !mc.is_zero() {
                    prod[k - d + j] -= &top * mc;
                }
            }
        }
        prod.truncate(d);
        FieldElement::from_parts(self.field.clone(), prod, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

// --- small dense polynomial helpers over Q, lowest degree first ---

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(k).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(out)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].recip();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let k = rem.len() - 1 - db;
        let c = &rem[rem.len() - 1] * &lead;
        for (j, y) in b.iter().enumerate() {
            let delta = &c * y;
            rem[k + j] -= delta;
        }
        quot[k] = c;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

/// A polynomial in `q` with rational coefficients, reduced modulo the
/// `2r`-th cyclotomic polynomial. `coeffs[k]` multiplies `q^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPolynomial {
    pub coeffs: Vec<BigRational>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coefficients with trailing zeros removed.
    pub fn trimmed(&self) -> Vec<BigRational> {
        trim(self.coeffs.clone())
    }

    pub fn degree(&self) -> Option<usize> {
        let t = self.trimmed();
        if t.is_empty() {
            None
        } else {
            Some(t.len() - 1)
        }
    }

    /// Reduces modulo the `2r`-th cyclotomic polynomial.
    pub fn reduce(&self, r: u32) -> QPolynomial {
        let m: Vec<BigRational> = cyclotomic_polynomial(2 * r as u64)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let (_, rem) = poly_divrem(&self.coeffs, &m);
        let mut coeffs = rem;
        coeffs.resize(m.len() - 1, BigRational::zero());
        QPolynomial { coeffs }
    }

    /// True when both sides agree modulo the `2r`-th cyclotomic polynomial.
    pub fn equivalent(&self, other: &QPolynomial, r: u32) -> bool {
        self.reduce(r).trimmed() == other.reduce(r).trimmed()
    }
}

/// Substitutes `q = e^{iπ/r}` in double precision.
pub fn eval_numeric(p: &QPolynomial, r: u32) -> Complex64 {
    p.coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let angle = std::f64::consts::PI * k as f64 / r as f64;
            Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
        })
        .sum()
}

/// Highest power first with explicit signs, e.g. `-q^3+q^2+2`.
impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.trimmed();
        if t.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in t.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({}/{})", mag.numer(), mag.denom())?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{k}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse polynomial {input:?}: {reason}")]
pub struct ParsePolynomialError {
    pub input: String,
    pub reason: String,
}

/// Parses the [`Display`](fmt::Display) form back, also accepting spaces,
/// the Unicode minus sign and `*` between coefficient and `q`.
impl FromStr for QPolynomial {
    type Err = ParsePolynomialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| ParsePolynomialError {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let cleaned: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '*' && *c != '(' && *c != ')')
            .map(|c| if c == '\u{2212}' { '-' } else { c })
            .collect();
        if cleaned.is_empty() {
            return Err(err("empty input"));
        }
        let mut coeffs: Vec<BigRational> = Vec::new();
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in cleaned.char_indices() {
            if (ch == '+' || ch == '-') && i > start {
                terms.push(&cleaned[start..i]);
                start = i;
            }
        }
        terms.push(&cleaned[start..]);
        for term in terms {
            let (sign, body) = match term.as_bytes().first() {
                Some(b'-') => (-1, &term[1..]),
                Some(b'+') => (1, &term[1..]),
                _ => (1, term),
            };
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let (coef_str, power) = match body.find('q') {
                None => (body, 0usize),
                Some(pos) => {
                    let rest = &body[pos + 1..];
                    let power = if rest.is_empty() {
                        1
                    } else if let Some(exp) = rest.strip_prefix('^') {
                        exp.parse().map_err(|_| err("bad exponent"))?
                    } else {
                        return Err(err("unexpected text after q"));
                    };
                    (&body[..pos], power)
                }
            };
            let coef = if coef_str.is_empty() {
                BigRational::one()
            } else if let Some((n, d)) = coef_str.split_once('/') {
                let n: BigInt = n.parse().map_err(|_| err("bad numerator"))?;
                let d: BigInt = d.parse().map_err(|_| err("bad denominator"))?;
                if d.is_zero() {
                    return Err(err("zero denominator"));
                }
                BigRational::new(n, d)
            } else {
                BigRational::from_integer(coef_str.parse().map_err(|_| err("bad coefficient"))?)
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigRational::zero());
            }
            coeffs[power] += coef * BigRational::from_integer(BigInt::from(sign));
        }
        Ok(QPolynomial { coeffs: trim(coeffs) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn field_sizes() {
        let f3 = CycloField::new(3).unwrap();
        assert_eq!((f3.order(), f3.degree()), (12, 4));
        let f4 = CycloField::new(4).unwrap();
        assert_eq!((f4.order(), f4.degree()), (16, 8));
        let f7 = CycloField::new(7).unwrap();
        assert_eq!((f7.order(), f7.degree()), (28, 12));
        assert_eq!(CycloField::new(2).unwrap_err(), FieldError::InvalidOrder(2));
    }

    #[test]
    fn i_unit_squares_to_minus_one() {
        for r in 3..=8 {
            let f = CycloField::new(r).unwrap();
            let i = f.i_unit();
            assert_eq!(&i * &i, f.from_integer(-1));
        }
        let f3 = CycloField::new(3).unwrap();
        assert_eq!(f3.i_unit(), f3.zeta_pow(3));
    }

    #[test]
    fn q_squared_has_order_r() {
        let f = CycloField::new(7).unwrap();
        let q2 = f.q_std().pow(2).unwrap();
        for k in 1..7 {
            assert!(!q2.pow(k).unwrap().is_one(), "k = {k}");
        }
        assert!(q2.pow(7).unwrap().is_one());
    }

    #[test]
    fn modulus_properties() {
        for r in 3..=8u32 {
            let f = CycloField::new(r).unwrap();
            let m = f.modulus();
            assert!(m.last().unwrap().is_one());
            assert_eq!(m.len() - 1, totient(4 * r as u64) as usize);
            // Φ divides x^order - 1: its value at ζ vanishes and ζ^order = 1
            let val = m.iter().enumerate().fold(f.zero(), |acc, (k, c)| {
                &acc + &f.zeta_pow(k as i64).scale(&BigRational::from_integer(c.clone()))
            });
            assert!(val.is_zero());
            assert!(f.zeta().pow(f.order() as i64).unwrap().is_one());
            let q = f.q_std();
            assert!(q.pow(2 * r as i64).unwrap().is_one());
        }
    }

    #[test]
    fn inverse_basics() {
        let f = CycloField::new(5).unwrap();
        assert_eq!(f.one().inverse().unwrap(), f.one());
        assert_eq!(f.zero().inverse().unwrap_err(), FieldError::ZeroInverse);
        let x = &f.zeta() + &f.from_integer(3);
        assert!((&x * &x.inverse().unwrap()).is_one());
        let z_inv = f.zeta().pow(-1).unwrap();
        assert_eq!(z_inv, f.zeta_pow(19));
    }

    #[test]
    fn q_minus_q_inverse_squared_r3() {
        let f = CycloField::new(3).unwrap();
        let q = f.q_std();
        let d = &q - &q.inverse().unwrap();
        assert_eq!(&d * &d, f.from_integer(-3));
    }

    #[test]
    fn conj_auto_examples() {
        let f = CycloField::new(6).unwrap();
        assert_eq!(f.one().conj_auto(), f.one());
        assert!((&f.zeta().conj_auto() * &f.zeta()).is_one());
        let q = f.q_std();
        let s = &q + &q.inverse().unwrap();
        assert_eq!(s.conj_auto(), s);
    }

    #[test]
    fn q_polynomial_membership() {
        let f = CycloField::new(5).unwrap();
        let p = f.to_q_polynomial(&f.one()).unwrap();
        assert_eq!(p.to_string(), "1");
        let q3 = f.q_std().pow(3).unwrap();
        let p = f.to_q_polynomial(&q3).unwrap();
        assert_eq!(p.to_string(), "q^3");
        assert_eq!(p.coeffs.len(), 4);
        assert_eq!(f.to_q_polynomial(&f.zeta()), Err(FieldError::NotInSubfield));
    }

    #[test]
    fn q_polynomial_reduces_high_powers() {
        // q^4 = q^3 - q^2 + q - 1 modulo Φ_10
        let f = CycloField::new(5).unwrap();
        let p = f.to_q_polynomial(&f.q_std().pow(4).unwrap()).unwrap();
        assert_eq!(p.to_string(), "q^3-q^2+q-1");
    }

    #[test]
    fn numeric_evaluation() {
        let one: QPolynomial = "1".parse().unwrap();
        let v = eval_numeric(&one, 4);
        assert!((v.re - 1.0).abs() < 1e-12 && v.im.abs() < 1e-12);
        let p: QPolynomial = "-q^3+q^2+2".parse().unwrap();
        assert!((eval_numeric(&p, 5).re - 2.618).abs() < 5e-4);
        let p: QPolynomial = "-2q^5+q^4-q^3+2q^2+3".parse().unwrap();
        assert!((eval_numeric(&p, 7).re - 5.049).abs() < 5e-4);
    }

    #[test]
    fn cyclotomic_polynomial_vanishes_numerically() {
        for r in 3..=9u32 {
            let coeffs = cyclotomic_polynomial(2 * r as u64)
                .into_iter()
                .map(BigRational::from_integer)
                .collect();
            let v = eval_numeric(&QPolynomial { coeffs }, r);
            assert!(v.norm() < 1e-9);
        }
    }

    #[test]
    fn polynomial_display_and_parse() {
        for s in [
            "-q^3+q^2+2",
            "0",
            "q^3-q",
            "2q^3-4q",
            "-2q^5+q^4-q^3+2q^2+3",
            "(1/2)q-3",
        ] {
            let p: QPolynomial = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        let p: QPolynomial = "\u{2212}q^3 + q^2 + 2".parse().unwrap();
        assert_eq!(p.coeffs, vec![rat(2), rat(0), rat(1), rat(-1)]);
        assert!("q^".parse::<QPolynomial>().is_err());
        assert!("3x".parse::<QPolynomial>().is_err());
    }

    #[test]
    fn to_complex_matches_embedding() {
        let f = CycloField::new(5).unwrap();
        let q = f.q_std().to_complex();
        let want = Complex64::from_polar(1.0, std::f64::consts::PI / 5.0);
        assert!((q - want).norm() < 1e-12);
    }
}
