//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use tvq_core::quantum::{Color, TetColors};
use tvq_core::triangulation::Triangulation;

/// `[n]` at `q = e^{iπ/r}` as a real number, exactly zero at multiples of `r`.
pub fn float_q_int(n: usize, r: u32) -> f64 {
    if n.is_multiple_of(r as usize) {
        return 0.0;
    }
    let t = std::f64::consts::PI / r as f64;
    (n as f64 * t).sin() / t.sin()
}

pub fn float_q_fact(n: usize, r: u32) -> f64 {
    (1..=n).map(|k| float_q_int(k, r)).product()
}

fn float_admissible(r: u32, i: Color, j: Color, k: Color) -> bool {
    let (i, j, k) = (i as i32, j as i32, k as i32);
    (i + j + k) % 2 == 0 && i + j + k <= 2 * r as i32 - 4 && (i - j).abs() <= k && k <= i + j
}

/// `Δ(i,j,k)` with a square root of a negative radicand taken as
/// `√-1 · √|x|`.
pub fn literal_delta(r: u32, i: Color, j: Color, k: Color) -> Complex64 {
    let (i, j, k) = (i as usize, j as usize, k as usize);
    let x = float_q_fact((i + j - k) / 2, r) * float_q_fact((i + k - j) / 2, r) * float_q_fact((j + k - i) / 2, r)
        / float_q_fact((i + j + k) / 2 + 1, r);
    if x >= 0.0 {
        Complex64::new(x.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-x).sqrt())
    }
}

/// `w_i² = (-1)^i [i+1]`.
pub fn literal_w_sq(r: u32, i: Color) -> f64 {
    let sign = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * float_q_int(i as usize + 1, r)
}

/// The alternating sum over every `z ≥ 0` for which all bracket arguments
/// are non-negative; terms with a vanishing numerator are dropped.
pub fn literal_bracket(r: u32, c: [Color; 6]) -> f64 {
    let [i, j, k, l, m, n] = c.map(|x| x as i64);
    let tri = [(i + j + k) / 2, (i + m + n) / 2, (j + l + n) / 2, (k + l + m) / 2];
    let quad = [(i + j + l + m) / 2, (i + k + l + n) / 2, (j + k + m + n) / 2];
    let mut acc = 0.0;
    for z in 0..=(3 * r as i64) {
        if tri.iter().any(|&t| z - t < 0) || quad.iter().any(|&q| q - z < 0) {
            continue;
        }
        let num = float_q_fact(z as usize + 1, r);
        if num == 0.0 {
            continue;
        }
        let mut den = 1.0;
        for &t in &tri {
            den *= float_q_fact((z - t) as usize, r);
        }
        for &q in &quad {
            den *= float_q_fact((q - z) as usize, r);
        }
        let sign = if z % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * num / den;
    }
    acc
}

/// `|T|` with its four `Δ` factors and the `(√-1)^{-S}` prefactor.
pub fn literal_tet(r: u32, c: [Color; 6]) -> Complex64 {
    let [i, j, k, l, m, n] = c;
    let s: u32 = c.iter().map(|&x| x as u32).sum();
    let prefactor = Complex64::new(0.0, 1.0).powu(4 - s % 4);
    let deltas =
        literal_delta(r, i, j, k) * literal_delta(r, i, m, n) * literal_delta(r, j, l, n) * literal_delta(r, k, l, m);
    prefactor * deltas * literal_bracket(r, c)
}

/// `∏ w² · ∏ |T|` evaluated in floating point at `q = e^{iπ/r}`.
pub fn literal_weight(tri: &Triangulation, coloring: &[Color], r: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for &c in coloring {
        acc *= literal_w_sq(r, c);
    }
    for t in 0..tri.num_tetrahedra() {
        acc *= literal_tet(r, tri.tet_colors(t, coloring).0);
    }
    acc
}

/// Every coloring in `{0..r-2}^edges`, kept when all faces are admissible.
pub fn brute_force_colorings(tri: &Triangulation, r: u32) -> Vec<Vec<Color>> {
    let ne = tri.num_edges();
    let base = (r - 1) as usize;
    let total = base.pow(ne as u32);
    let mut out = Vec::new();
    for mut code in 0..total {
        let coloring: Vec<Color> = (0..ne)
            .map(|_| {
                let c = (code % base) as Color;
                code /= base;
                c
            })
            .collect();
        if tri.faces().iter().all(|f| {
            let [a, b, c] = f.edges.map(|e| coloring[e]);
            float_admissible(r, a, b, c)
        }) {
            out.push(coloring);
        }
    }
    out
}

/// `0` all even, `1` for `v - t + f` odd, `2` otherwise; computed straight
/// from the incidence tables.
pub fn oracle_class(tri: &Triangulation, coloring: &[Color]) -> u8 {
    let odd = |e: usize| coloring[e] % 2 == 1;
    if !(0..coloring.len()).any(odd) {
        return 0;
    }
    let v = (0..tri.num_tetrahedra())
        .filter(|&t| tri.tet_edges(t).iter().any(|&e| odd(e)))
        .count() as i64;
    let t = tri.faces().iter().filter(|f| f.edges.iter().any(|&e| odd(e))).count() as i64;
    let f = (0..coloring.len()).filter(|&e| odd(e)).count() as i64;
    if (v - t + f).rem_euclid(2) == 1 {
        1
    } else {
        2
    }
}

/// All valid tetrahedron colorings for `r`.
pub fn all_tet_colors(r: u32) -> Vec<TetColors> {
    let top = (r - 1) as Color;
    let mut out = Vec::new();
    let mut c = [0 as Color; 6];
    loop {
        if let Ok(t) = TetColors::new(r, c) {
            out.push(t);
        }
        let mut k = 0;
        loop {
            if k == 6 {
                return out;
            }
            c[k] += 1;
            if c[k] < top {
                break;
            }
            c[k] = 0;
            k += 1;
        }
    }
}
