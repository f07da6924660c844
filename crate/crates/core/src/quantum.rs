//! Quantum integers, theta and edge weights, and the 6j bracket sum at a
//! root of unity.
//!
//! Only squares of the square-root quantities (`Δ²`, `w²`) are ever
//! computed, so everything stays inside the cyclotomic field.

use thiserror::Error;

use crate::cyclotomic::{CycloField, FieldElement, FieldError};

/// A color in `{0, …, r-2}`.
pub type Color = u8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantumError {
    #[error("denominator vanished in {context} for colors {colors:?}")]
    DenominatorVanished { context: &'static str, colors: Vec<Color> },
    #[error("evaluation point is not valid: u^2 must have multiplicative order exactly r")]
    InvalidEvaluationPoint,
    #[error("color {color} out of range for r = {r}")]
    ColorOutOfRange { color: Color, r: u32 },
    #[error("face {face:?} of the tetrahedron is not admissible")]
    InadmissibleFace { face: [Color; 3] },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `i + j + k` even, at most `2r - 4`, and `|i - j| ≤ k ≤ i + j`.
pub fn admissible(r: u32, i: Color, j: Color, k: Color) -> bool {
    let (i, j, k) = (i as i64, j as i64, k as i64);
    let s = i + j + k;
    s % 2 == 0 && s <= 2 * r as i64 - 4 && (i - j).abs() <= k && k <= i + j
}

/// Six colors of a tetrahedron. `(i, j, k)` color one face and
/// `(i, l)`, `(j, m)`, `(k, n)` are the opposite-edge pairs, so the four
/// faces are `(i,j,k)`, `(i,m,n)`, `(j,l,n)`, `(k,l,m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TetColors(pub [Color; 6]);

// Tetrahedral symmetries as permutations of the six slots, generated from
// the two column/row moves below; used for memo keys.
const SYM_GENERATORS: [[usize; 6]; 2] = [
    // (i,j,k;l,m,n) -> (j,i,k;m,l,n)
    [1, 0, 2, 4, 3, 5],
    // (i,j,k;l,m,n) -> (j,k,i;m,n,l)
    [1, 2, 0, 4, 5, 3],
];

impl TetColors {
    pub fn new(r: u32, c: [Color; 6]) -> Result<Self, QuantumError> {
        for &x in &c {
            if x as u32 > r - 2 {
                return Err(QuantumError::ColorOutOfRange { color: x, r });
            }
        }
        let t = TetColors(c);
        for face in t.faces() {
            if !admissible(r, face[0], face[1], face[2]) {
                return Err(QuantumError::InadmissibleFace { face });
            }
        }
        Ok(t)
    }

    pub fn faces(&self) -> [[Color; 3]; 4] {
        let [i, j, k, l, m, n] = self.0;
        [[i, j, k], [i, m, n], [j, l, n], [k, l, m]]
    }

    /// Smallest representative over the 24 symmetries of the tetrahedron.
    /// All images under the 24 symmetries of the tetrahedron.
    pub fn orbit(&self) -> Vec<TetColors> {
        let mut seen = vec![*self];
        let mut frontier = vec![*self];
        while let Some(t) = frontier.pop() {
            let mut imgs = SYM_GENERATORS
                .iter()
                .map(|g| TetColors(std::array::from_fn(|s| t.0[g[s]])))
                .collect::<Vec<_>>();
            // swapping rows in two columns: (i,j,k;l,m,n) -> (l,m,k;i,j,n)
            let [i, j, k, l, m, n] = t.0;
            imgs.push(TetColors([l, m, k, i, j, n]));
            for img in imgs {
                if !seen.contains(&img) {
                    seen.push(img);
                    frontier.push(img);
                }
            }
        }
        seen
    }

    /// Smallest element of the orbit.
    pub fn canonical(&self) -> TetColors {
        *self.orbit().iter().min().expect("orbit is nonempty")
    }
}

/// `S = i+j+k+l+m+n (mod 4)`; the tetrahedron carries a factor `(√-1)^{-S}`.
pub fn tet_sign_exponent(c: &TetColors) -> u8 {
    (c.0.iter().map(|&x| x as u32).sum::<u32>() % 4) as u8
}

/// Precomputed quantum integers and factorials for one evaluation point.
#[derive(Debug, Clone)]
pub struct QuantumKernel {
    field: CycloField,
    r: u32,
    u: FieldElement,
    /// `[n]_u` for `n` in `0..=2r`.
    qints: Vec<FieldElement>,
    /// `[n]_u!` for `n` in `0..r`; zero from `n = r` onwards.
    facts: Vec<FieldElement>,
    /// `-(u - u^{-1})^2`, the algebraic form of `|q - q^{-1}|^2`.
    m: FieldElement,
}

impl QuantumKernel {
    pub fn new(field: &CycloField, u: FieldElement) -> Result<Self, QuantumError> {
        let r = field.r();
        let u2 = &u * &u;
        let mut p = field.one();
        for k in 1..=r {
            p = &p * &u2;
            if p.is_one() != (k == r) {
                return Err(QuantumError::InvalidEvaluationPoint);
            }
        }
        let u_inv = u.inverse()?;
        let diff = &u - &u_inv;
        let m = -(&diff * &diff);
        let mut qints = Vec::with_capacity(2 * r as usize + 1);
        qints.push(field.zero());
        for n in 1..=2 * r as i64 {
            // [n] = u^{n-1} + u^{n-3} + ... + u^{-(n-1)}
            let mut acc = field.zero();
            let mut term = u.pow(n - 1)?;
            let step = &u_inv * &u_inv;
            for _ in 0..n {
                acc = &acc + &term;
                term = &term * &step;
            }
            qints.push(acc);
        }
        let mut facts = vec![field.one()];
        for n in 1..r as usize {
            let next = &facts[n - 1] * &qints[n];
            facts.push(next);
        }
        Ok(QuantumKernel {
            field: field.clone(),
            r,
            u,
            qints,
            facts,
            m,
        })
    }

    /// Kernel at `u = ζ²`.
    pub fn standard(field: &CycloField) -> Result<Self, QuantumError> {
        Self::new(field, field.q_std())
    }

    /// Kernel at `u = -ζ²`.
    pub fn mirror(field: &CycloField) -> Result<Self, QuantumError> {
        Self::new(field, -field.q_std())
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn u(&self) -> &FieldElement {
        &self.u
    }

    /// Whether `u` itself has multiplicative order `2r`.
    pub fn is_primitive(&self) -> bool {
        let mut p = self.field.one();
        for k in 1..=2 * self.r {
            p = &p * &self.u;
            if p.is_one() {
                return k == 2 * self.r;
            }
        }
        false
    }

    /// `[n]_u = (u^n - u^{-n}) / (u - u^{-1})`; `[0]_u = 0`.
    pub fn q_int(&self, n: usize) -> FieldElement {
        match self.qints.get(n) {
            Some(x) => x.clone(),
            None => {
                // [n + 2r] = [n]
                self.qints[n % (2 * self.r as usize)].clone()
            }
        }
    }

    /// `[n]_u!` with `[0]_u! = 1`. Zero for `n ≥ r` since `[r]_u = 0`.
    pub fn q_fact(&self, n: usize) -> FieldElement {
        self.facts.get(n).cloned().unwrap_or_else(|| self.field.zero())
    }

    fn fact_ref(&self, n: usize) -> Option<&FieldElement> {
        self.facts.get(n)
    }

    /// `Δ²(i,j,k) = [a]![b]![c]! / [s+1]!` with half-sum `s`.
    pub fn delta_sq(&self, i: Color, j: Color, k: Color) -> Result<FieldElement, QuantumError> {
        debug_assert!(admissible(self.r, i, j, k));
        let (i, j, k) = (i as usize, j as usize, k as usize);
        let a = (i + j - k) / 2;
        let b = (i + k - j) / 2;
        let c = (j + k - i) / 2;
        let s = (i + j + k) / 2;
        let vanished = || QuantumError::DenominatorVanished {
            context: "theta weight",
            colors: vec![i as Color, j as Color, k as Color],
        };
        let den = self.fact_ref(s + 1).filter(|d| !d.is_zero()).ok_or_else(vanished)?;
        let num = &(&self.q_fact(a) * &self.q_fact(b)) * &self.q_fact(c);
        Ok(&num * &den.inverse()?)
    }

    /// `w_i² = (-1)^i [i+1]_u`.
    pub fn weight_sq(&self, i: Color) -> FieldElement {
        let x = self.q_int(i as usize + 1);
        if i.is_multiple_of(2) {
            x
        } else {
            -x
        }
    }

    /// The alternating bracket sum over `z` from `max(T)` to `min(Q)`,
    /// where `T` are the four face half-sums and `Q` the three quadrilateral
    /// half-sums. Terms whose numerator factorial vanishes are skipped.
    pub fn bracket6j(&self, c: &TetColors) -> Result<FieldElement, QuantumError> {
        let [i, j, k, l, m, n] = c.0.map(|x| x as usize);
        let tri = [(i + j + k) / 2, (i + m + n) / 2, (j + l + n) / 2, (k + l + m) / 2];
        let quad = [(i + j + l + m) / 2, (i + k + l + n) / 2, (j + k + m + n) / 2];
        let lo = *tri.iter().max().expect("four faces");
        let hi = *quad.iter().min().expect("three quads");
        let mut acc = self.field.zero();
        for z in lo..=hi {
            let Some(num) = self.fact_ref(z + 1) else {
                continue;
            };
            if num.is_zero() {
                continue;
            }
            let mut den = self.field.one();
            for &t in &tri {
                den = &den * &self.q_fact(z - t);
            }
            for &qv in &quad {
                den = &den * &self.q_fact(qv - z);
            }
            if den.is_zero() {
                return Err(QuantumError::DenominatorVanished {
                    context: "6j bracket",
                    colors: c.0.to_vec(),
                });
            }
            let term = num * &den.inverse()?;
            acc = if z % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        Ok(acc)
    }

    /// `(√-1)^{-S}` times the bracket sum: everything a tetrahedron
    /// contributes once its four face `Δ` factors are moved onto the faces.
    pub fn tet_factor(&self, c: &TetColors) -> Result<FieldElement, QuantumError> {
        let b = self.bracket6j(c)?;
        let s = tet_sign_exponent(c) as i64;
        Ok(&b * &self.field.i_unit().pow(-s)?)
    }

    /// `-(u - u^{-1})²`.
    pub fn m(&self) -> &FieldElement {
        &self.m
    }

    /// `ω² = 2r / m(u)`.
    pub fn omega_sq(&self) -> FieldElement {
        let inv = self.m.inverse().expect("u - 1/u is nonzero for valid u");
        &self.field.from_integer(2 * self.r as i64) * &inv
    }

    /// `ω_0² = r / m(u)`.
    pub fn omega0_sq(&self) -> FieldElement {
        let inv = self.m.inverse().expect("u - 1/u is nonzero for valid u");
        &self.field.from_integer(self.r as i64) * &inv
    }
}

/// Result of one exact identity among the weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightIdentity {
    pub name: String,
    pub holds: bool,
}

impl QuantumKernel {
    /// `w_j^{-2} Σ w_k² w_l²` over admissible `{j, k, l}`, optionally
    /// restricted to even `k, l`.
    pub fn loop_sum(&self, j: Color, even_only: bool) -> FieldElement {
        let top = (self.r - 1) as Color;
        let mut acc = self.field.zero();
        for k in 0..top {
            for l in 0..top {
                if even_only && (k % 2 == 1 || l % 2 == 1) {
                    continue;
                }
                if admissible(self.r, j, k, l) {
                    acc = &acc + &(&self.weight_sq(k) * &self.weight_sq(l));
                }
            }
        }
        let wj = self.weight_sq(j).inverse().expect("[j+1] is nonzero below r");
        &acc * &wj
    }

    /// The weight identities behind the normalizations `ω²` and `ω_0²`.
    pub fn weight_identities(&self) -> Vec<WeightIdentity> {
        let r = self.r;
        let mut out = Vec::new();
        let mut fourth = self.field.zero();
        for t in 0..r / 2 {
            let w = self.weight_sq((2 * t) as Color);
            fourth = &fourth + &(&w * &w);
        }
        out.push(WeightIdentity {
            name: "sum of w_{2t}^4 = -r/(u-1/u)^2".into(),
            holds: fourth == self.omega0_sq(),
        });
        let base = self.loop_sum(0, true);
        for j in (0..(r - 1) as Color).step_by(2) {
            out.push(WeightIdentity {
                name: format!("even loop sum at j={j} equals j=0"),
                holds: self.loop_sum(j, true) == base,
            });
        }
        out.push(WeightIdentity {
            name: "even loop sum = omega_0^2".into(),
            holds: base == self.omega0_sq(),
        });
        let omega = self.omega_sq();
        for j in 0..(r - 1) as Color {
            out.push(WeightIdentity {
                name: format!("loop sum at j={j} = omega^2"),
                holds: self.loop_sum(j, false) == omega,
            });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel(r: u32) -> QuantumKernel {
        QuantumKernel::standard(&CycloField::new(r).unwrap()).unwrap()
    }

    #[test]
    fn admissibility_examples() {
        assert!(admissible(5, 0, 0, 0));
        assert!(!admissible(5, 1, 1, 1));
        assert!(!admissible(5, 3, 3, 2));
        assert!(admissible(7, 3, 3, 2));
        assert!(!admissible(7, 0, 2, 4));
    }

    #[test]
    fn quantum_integer_examples() {
        for r in 3..=7 {
            let k = kernel(r);
            let f = k.field().clone();
            let u = k.u().clone();
            assert!(k.q_int(1).is_one());
            assert_eq!(k.q_int(2), &u + &u.inverse().unwrap());
            assert!(k.q_int(r as usize).is_zero());
            assert!(k.q_int(0).is_zero());
            assert!(k.q_fact(0).is_one());
            assert_eq!(k.q_fact(2), k.q_int(2));
            assert!(k.q_fact(r as usize).is_zero());
            // ratio form agrees with the telescoped sum
            let d = &u - &u.inverse().unwrap();
            for n in 1..=2 * r as i64 {
                let ratio = &(&u.pow(n).unwrap() - &u.pow(-n).unwrap()) * &d.inverse().unwrap();
                assert_eq!(ratio, k.q_int(n as usize), "r={r} n={n}");
            }
            let _ = f;
        }
    }

    #[test]
    fn delta_sq_examples() {
        let k = kernel(5);
        assert!(k.delta_sq(0, 0, 0).unwrap().is_one());
        for i in 0..=3u8 {
            let want = k.q_int(i as usize + 1).inverse().unwrap();
            assert_eq!(k.delta_sq(i, 0, i).unwrap(), want);
        }
        let d = k.delta_sq(2, 2, 2).unwrap();
        let want = (&(&k.q_int(4) * &k.q_int(3)) * &k.q_int(2)).inverse().unwrap();
        assert_eq!(d, want);
        // numeric cross-check at q = e^{iπ/5}
        let s = |n: f64| (n * std::f64::consts::PI / 5.0).sin() / (std::f64::consts::PI / 5.0).sin();
        let num = 1.0 / (s(4.0) * s(3.0) * s(2.0));
        assert!((d.to_complex().re - num).abs() < 1e-12);
    }

    #[test]
    fn weight_sq_examples() {
        let k = kernel(6);
        assert!(k.weight_sq(0).is_one());
        let u = k.u().clone();
        assert_eq!(k.weight_sq(1), -(&u + &u.inverse().unwrap()));
        assert_eq!(k.weight_sq(2), k.q_int(3));
    }

    #[test]
    fn bracket_all_zero_is_one() {
        for r in 3..=7 {
            let k = kernel(r);
            assert!(k.bracket6j(&TetColors([0; 6])).unwrap().is_one());
        }
    }

    #[test]
    fn sign_exponent_examples() {
        assert_eq!(tet_sign_exponent(&TetColors([0; 6])), 0);
        assert_eq!(tet_sign_exponent(&TetColors([1, 1, 0, 1, 1, 0])), 0);
        assert_eq!(tet_sign_exponent(&TetColors([2; 6])), 0);
        assert_eq!(tet_sign_exponent(&TetColors([1, 1, 0, 0, 0, 1])), 3);
    }

    #[test]
    fn omega_examples() {
        let k = kernel(3);
        assert_eq!(k.m(), &k.field().from_integer(3));
        assert_eq!(k.omega_sq(), k.field().from_integer(2));
        let k = kernel(4);
        assert_eq!(k.omega_sq(), k.field().from_integer(4));
        for r in 3..=7 {
            let k = kernel(r);
            assert_eq!(k.omega_sq(), &k.omega0_sq() + &k.omega0_sq());
        }
    }

    #[test]
    fn tet_colors_validation() {
        assert!(TetColors::new(5, [2, 2, 2, 2, 2, 2]).is_ok());
        assert!(matches!(
            TetColors::new(5, [1, 1, 1, 0, 0, 0]),
            Err(QuantumError::InadmissibleFace { .. })
        ));
        assert!(matches!(
            TetColors::new(3, [2, 0, 2, 0, 0, 0]),
            Err(QuantumError::ColorOutOfRange { .. })
        ));
    }

    #[test]
    fn canonical_orbit_has_expected_size() {
        // all-distinct labels: the orbit is the full tetrahedral group
        let t = TetColors([0, 1, 2, 3, 4, 5]);
        let orbit = t.orbit();
        assert_eq!(orbit.len(), 24);
        for img in &orbit {
            assert_eq!(img.canonical(), t);
            let mut faces: Vec<[Color; 3]> = img
                .faces()
                .map(|mut f| {
                    f.sort();
                    f
                })
                .to_vec();
            faces.sort();
            let mut orig: Vec<[Color; 3]> = t
                .faces()
                .map(|mut f| {
                    f.sort();
                    f
                })
                .to_vec();
            orig.sort();
            assert_eq!(faces, orig);
        }
        // three edges at one vertex
        assert_eq!(TetColors([1, 1, 0, 0, 0, 1]).orbit().len(), 4);
    }

    #[test]
    fn weight_identities_hold() {
        for r in 3..=7 {
            for k in [kernel(r), QuantumKernel::mirror(&CycloField::new(r).unwrap()).unwrap()] {
                for id in k.weight_identities() {
                    assert!(id.holds, "r={r}: {}", id.name);
                }
            }
        }
    }

    #[test]
    fn mirror_point_is_not_primitive_for_odd_r() {
        let f = CycloField::new(5).unwrap();
        assert!(QuantumKernel::standard(&f).unwrap().is_primitive());
        assert!(!QuantumKernel::mirror(&f).unwrap().is_primitive());
        let f = CycloField::new(4).unwrap();
        assert!(QuantumKernel::mirror(&f).unwrap().is_primitive());
        assert_eq!(
            QuantumKernel::new(&f, f.zeta()).unwrap_err(),
            QuantumError::InvalidEvaluationPoint
        );
    }
}
