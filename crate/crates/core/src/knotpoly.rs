//! Conway polynomials of link diagrams, by skein recursion and by an
//! Alexander determinant, and the invariants read off them.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::link::LinkDiagram;
use crate::poly::IntLaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("the Alexander route handles knots only, got {0} components")]
    NotAKnot(usize),
    #[error("odd power z^{0} in a knot polynomial")]
    OddPower(i32),
}

/// Conway polynomial by switching crossings toward a descending diagram:
/// ∇(L) = ∇(L switched at c) + sign(c)·z·∇(L smoothed at c).
pub fn conway_skein(ld: &LinkDiagram) -> IntLaurentPoly {
    Skein::default().eval(ld)
}

#[derive(Default)]
struct Skein {
    memo: HashMap<Vec<u32>, IntLaurentPoly>,
}

impl Skein {
    fn eval(&mut self, ld: &LinkDiagram) -> IntLaurentPoly {
        let d = ld.reduce();
        if d.crossings.is_empty() {
            return if d.free_loops == 1 { IntLaurentPoly::one() } else { IntLaurentPoly::zero() };
        }
        if d.split_groups() > 1 {
            return IntLaurentPoly::zero();
        }
        let key = d.canonical_key();
        if let Some(p) = self.memo.get(&key) {
            return p.clone();
        }
        let p = match first_bad_crossing(&d) {
            None if d.component_count() == 1 => IntLaurentPoly::one(),
            None => IntLaurentPoly::zero(),
            Some(k) => {
                let sign = d.crossings[k].sign as i64;
                let switched = self.eval(&d.switch(k));
                let smoothed = self.eval(&d.smooth(k));
                &switched + &smoothed.shift(1).scale(sign)
            }
        };
        self.memo.insert(key, p.clone());
        p
    }
}

/// Walks the components in order from their first edge and returns the
/// first crossing met for the first time on its under-strand. A diagram
/// without one is descending and thus an unlink.
fn first_bad_crossing(d: &LinkDiagram) -> Option<usize> {
    let mut seen = vec![false; d.crossings.len()];
    let mut at = vec![Vec::new(); d.num_edges()];
    for (k, x) in d.crossings.iter().enumerate() {
        at[x.pd[0]].push((k, false));
        at[x.over_in()].push((k, true));
    }
    for comp in d.components() {
        for e in comp {
            for &(k, over) in &at[e] {
                if !seen[k] {
                    if !over {
                        return Some(k);
                    }
                    seen[k] = true;
                }
            }
        }
    }
    None
}

/// Conway polynomial of a knot through the Alexander polynomial, computed as
/// an exact determinant at integer points and interpolated.
pub fn conway_via_alexander(ld: &LinkDiagram) -> Result<IntLaurentPoly, PolyError> {
    let comps = ld.component_count();
    if comps != 1 {
        return Err(PolyError::NotAKnot(comps));
    }
    let alex = alexander(ld);
    Ok(alexander_to_conway(&alex))
}

/// Alexander polynomial in t, up to units, from the crossing relations of
/// the over-arcs with one row and one column removed.
pub fn alexander(ld: &LinkDiagram) -> IntLaurentPoly {
    let n = ld.crossings.len();
    if n == 0 {
        return IntLaurentPoly::one();
    }
    let arcs = arc_labels(ld);
    let arc_count = arcs.iter().max().map_or(0, |m| m + 1);
    if arc_count != n {
        // Some component never passes under: it lifts off, so the link splits.
        return IntLaurentPoly::zero();
    }
    let m = n - 1;
    if m == 0 {
        return IntLaurentPoly::one();
    }
    let rows: Vec<Vec<(usize, i64, i64)>> = ld
        .crossings
        .iter()
        .take(m)
        .map(|x| {
            // Entries as (column, constant part, t part).
            let over = arcs[x.over_in()];
            let (inc, out) = (arcs[x.pd[0]], arcs[x.pd[2]]);
            let mut row = vec![(over, 1, -1)];
            if x.sign > 0 {
                row.extend([(inc, 0, 1), (out, -1, 0)]);
            } else {
                row.extend([(inc, -1, 0), (out, 0, 1)]);
            }
            row.retain(|&(c, _, _)| c < m);
            row
        })
        .collect();
    // Each row has coefficient mass at most 4, so |coefficients| ≤ 4^m.
    let primes_needed = (2 * m + 2).div_ceil(60);
    if primes_needed <= PRIMES.len() {
        let residues: Vec<Vec<u64>> = PRIMES[..primes_needed].iter().map(|&p| det_poly_mod(&rows, m, p)).collect();
        let coeffs = crt_symmetric(&residues, &PRIMES[..primes_needed]);
        return IntLaurentPoly::from_terms(coeffs.into_iter().enumerate().map(|(e, c)| (e as i32, c)));
    }
    // det has degree at most m in t; sample m + 1 points.
    let points: Vec<i64> = (0..=m as i64).map(|i| if i % 2 == 0 { i / 2 } else { -(i + 1) / 2 }).collect();
    let values: Vec<BigInt> = points
        .iter()
        .map(|&t| {
            let mut mat = vec![vec![BigInt::zero(); m]; m];
            for (k, row) in rows.iter().enumerate() {
                for &(c, a, b) in row {
                    mat[k][c] += a + b * t;
                }
            }
            bareiss(mat)
        })
        .collect();
    let coeffs = interpolate(&points, &values);
    IntLaurentPoly::from_terms(coeffs.into_iter().enumerate().map(|(e, c)| (e as i32, c)))
}

const PRIMES: [u64; 8] = [
    2305843009213693951,
    2305843009213693921,
    2305843009213693907,
    2305843009213693723,
    2305843009213693693,
    2305843009213693669,
    2305843009213693613,
    2305843009213693561,
];

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn to_mod(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

/// Coefficients mod p of det(A + tB), from its values at t = 0..=m.
fn det_poly_mod(rows: &[Vec<(usize, i64, i64)>], m: usize, p: u64) -> Vec<u64> {
    let values: Vec<u64> = (0..=m as u64)
        .map(|t| {
            let mut a = vec![vec![0u64; m]; m];
            for (k, row) in rows.iter().enumerate() {
                for &(c, x, y) in row {
                    let v = (to_mod(x, p) + mul_mod(to_mod(y, p), t, p)) % p;
                    a[k][c] = (a[k][c] + v) % p;
                }
            }
            det_mod(a, p)
        })
        .collect();
    interpolate_mod(&values, p)
}

fn det_mod(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for k in 0..n {
        let Some(r) = (k..n).find(|&r| a[r][k] != 0) else {
            return 0;
        };
        if r != k {
            a.swap(k, r);
            det = (p - det) % p;
        }
        det = mul_mod(det, a[k][k], p);
        let inv = inv_mod(a[k][k], p);
        for i in k + 1..n {
            if a[i][k] == 0 {
                continue;
            }
            let f = mul_mod(a[i][k], inv, p);
            for j in k..n {
                let sub = mul_mod(f, a[k][j], p);
                a[i][j] = (a[i][j] + p - sub) % p;
            }
        }
    }
    det
}

/// Newton interpolation over F_p at the points 0, 1, …, n − 1.
fn interpolate_mod(ys: &[u64], p: u64) -> Vec<u64> {
    let n = ys.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        let inv = inv_mod(j as u64 % p, p);
        for i in (j..n).rev() {
            dd[i] = mul_mod((dd[i] + p - dd[i - 1]) % p, inv, p);
        }
    }
    let mut poly = vec![0u64; n];
    for i in (0..n).rev() {
        let mut next = vec![0u64; n];
        for e in 0..n {
            if poly[e] == 0 {
                continue;
            }
            if e + 1 < n {
                next[e + 1] = (next[e + 1] + poly[e]) % p;
            }
            next[e] = (next[e] + p - mul_mod(poly[e], i as u64, p)) % p;
        }
        next[0] = (next[0] + dd[i]) % p;
        poly = next;
    }
    poly
}

/// Combines residues by the Chinese remainder theorem into the integers of
/// least absolute value.
fn crt_symmetric(residues: &[Vec<u64>], primes: &[u64]) -> Vec<i64> {
    let len = residues[0].len();
    let modulus: BigInt = primes.iter().map(|&p| BigInt::from(p)).product();
    let half = &modulus / 2;
    (0..len)
        .map(|e| {
            let mut x = BigInt::zero();
            for (r, &p) in residues.iter().zip(primes) {
                let mp = &modulus / p;
                let inv = inv_mod((&mp % p).to_u64().unwrap(), p);
                x += BigInt::from(r[e]) * &mp * inv;
            }
            x %= &modulus;
            if x > half {
                x -= &modulus;
            }
            x.to_i64().expect("Alexander coefficient fits in i64")
        })
        .collect()
}

/// Edge → over-arc id: edges joined by passing over a crossing share an arc.
fn arc_labels(ld: &LinkDiagram) -> Vec<usize> {
    let n = ld.num_edges();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for x in &ld.crossings {
        let (a, b) = (find(&mut parent, x.over_in()), find(&mut parent, x.over_out()));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut ids = HashMap::new();
    (0..n)
        .map(|e| {
            let r = find(&mut parent, e);
            let next = ids.len();
            *ids.entry(r).or_insert(next)
        })
        .collect()
}

/// Fraction-free Gaussian elimination.
fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Coefficients, lowest degree first, of the polynomial through the points.
fn interpolate(xs: &[i64], ys: &[BigInt]) -> Vec<i64> {
    let n = xs.len();
    // Newton divided differences.
    let mut dd: Vec<BigRational> = ys.iter().map(|y| BigRational::from_integer(y.clone())).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let den = BigInt::from(xs[i] - xs[i - j]);
            dd[i] = (&dd[i] - &dd[i - 1]) / BigRational::from_integer(den);
        }
    }
    let mut poly = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        // poly = poly·(x − xs[i]) + dd[i]
        let mut next = vec![BigRational::zero(); n];
        for (e, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if e + 1 < n {
                next[e + 1] += c;
            }
            next[e] -= c * BigRational::from_integer(BigInt::from(xs[i]));
        }
        next[0] += &dd[i];
        poly = next;
    }
    poly.into_iter()
        .map(|c| {
            assert!(c.is_integer(), "interpolated Alexander coefficient is not an integer");
            c.to_integer().to_i64().expect("coefficient fits in i64")
        })
        .collect()
}

/// Normalizes a knot's Alexander polynomial to be symmetric with Δ(1) = 1
/// and rewrites it in z = t^½ − t^-½.
pub fn alexander_to_conway(alex: &IntLaurentPoly) -> IntLaurentPoly {
    let (Some(lo), Some(hi)) = (alex.min_degree(), alex.max_degree()) else {
        return IntLaurentPoly::zero();
    };
    let span = hi - lo;
    assert!(span % 2 == 0, "knot Alexander polynomial has even span");
    let mut sym = alex.shift(-lo - span / 2);
    if sym.at_one() < 0 {
        sym = -&sym;
    }
    // Peel off the top term with (t^½ − t^-½)^(2k) = (t − 2 + t⁻¹)^k.
    let step = IntLaurentPoly::from_terms([(-1, 1), (0, -2), (1, 1)]);
    let mut out = IntLaurentPoly::zero();
    while let Some(k) = sym.max_degree() {
        let c = sym.coeff(k);
        let mut pow = IntLaurentPoly::one();
        for _ in 0..k {
            pow = &pow * &step;
        }
        sym = &sym - &pow.scale(c);
        out = &out + &IntLaurentPoly::monomial(c, 2 * k);
        if k == 0 {
            break;
        }
    }
    out
}

/// Casson's invariant: the z² coefficient of a knot's Conway polynomial.
pub fn casson_c2(p: &IntLaurentPoly) -> Result<i64, PolyError> {
    if let Some((e, _)) = p.terms().find(|(e, _)| e % 2 != 0) {
        return Err(PolyError::OddPower(e));
    }
    Ok(p.coeff(2))
}

/// The Arf invariant, C₂ mod 2.
pub fn arf(c2: i64) -> u8 {
    c2.rem_euclid(2) as u8
}

/// Coefficient of z^(μ−1) predicted by the linking numbers of a μ-component
/// link: a cofactor of the weighted Laplacian of the linking graph.
pub fn leading_from_linking(ld: &LinkDiagram) -> i64 {
    let mu = ld.component_count();
    if mu <= 1 {
        return 1;
    }
    let m = mu - 1;
    let mut lap = vec![vec![BigInt::zero(); m]; m];
    for a in 0..mu {
        for b in 0..mu {
            if a == b {
                continue;
            }
            let lk = ld.linking_number(a, b).unwrap_or(0);
            if a < m {
                lap[a][a] += lk;
                if b < m {
                    lap[a][b] -= lk;
                }
            }
        }
    }
    bareiss(lap).to_i64().unwrap_or(0)
}

/// Sign check for multi-component output: the lowest Conway coefficient is
/// fixed by linking numbers.
pub fn lowest_coefficient_ok(ld: &LinkDiagram, p: &IntLaurentPoly) -> bool {
    let mu = ld.component_count() as i32;
    p.coeff(mu - 1) == leading_from_linking(ld) && p.min_degree().is_none_or(|d| d >= mu - 1)
}

/// Outcome of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// A value could not be obtained, so nothing was compared.
    Incomplete,
}

impl Verdict {
    pub fn of(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Incomplete => "incomplete",
        })
    }
}

/// Both sides of C₂ = J±₂ and of Arf = J⁻/2 mod 2 for a one-branch divide.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct TheoremReport {
    pub delta: usize,
    pub c2_skein: i64,
    pub c2_alexander: i64,
    /// `None` when no reduction script was found within the budget.
    pub j2: Option<i64>,
    pub j_minus: i64,
    pub arf_link: u8,
    pub arf_corollary: u8,
    pub theorem: Verdict,
    pub corollary: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error(transparent)]
    Divide(#[from] crate::divide::DivideError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Arnold(#[from] crate::arnold::ArnoldError),
    #[error(transparent)]
    Script(#[from] crate::moves::ScriptError),
}

/// Checks the theorem on one divide. J±₂ comes from `script` when given,
/// otherwise from a search within `budget`.
pub fn verify_theorem(
    d: &crate::divide::Divide,
    script: Option<&crate::moves::ReductionScript>,
    budget: crate::moves::SearchBudget,
) -> Result<TheoremReport, TheoremError> {
    use crate::moves::{j2_auto, j2_evaluate, Outcome};
    d.require_one_branch()?;
    let (_, ld) = crate::acampo::divide_link(d);
    let c2_skein = casson_c2(&conway_skein(&ld))?;
    let c2_alexander = casson_c2(&conway_via_alexander(&ld)?)?;
    let j2 = match script {
        Some(s) => Some(j2_evaluate(d, s)?),
        None => match j2_auto(d, budget)? {
            Outcome::Value { value, .. } => Some(value),
            Outcome::GaveUp { .. } => None,
        },
    };
    let arf_corollary = crate::arnold::arf_from_j(d)?;
    let j_minus = crate::arnold::j_divide(d)?.j_minus.to_integer();
    let arf_link = arf(c2_skein);
    let theorem = match j2 {
        Some(j) => Verdict::of(j == c2_skein && c2_skein == c2_alexander),
        None => Verdict::Incomplete,
    };
    Ok(TheoremReport {
        delta: d.delta,
        c2_skein,
        c2_alexander,
        j2,
        j_minus,
        arf_link,
        arf_corollary,
        theorem,
        corollary: Verdict::of(arf_link == arf_corollary),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::tests::trefoil;

    fn z(terms: &[(i32, i64)]) -> IntLaurentPoly {
        IntLaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn unknot_and_unlink() {
        assert_eq!(conway_skein(&LinkDiagram::unknot()), IntLaurentPoly::one());
        let two = LinkDiagram { crossings: vec![], free_loops: 2 };
        assert!(conway_skein(&two).is_zero());
        assert_eq!(conway_via_alexander(&LinkDiagram::unknot()).unwrap(), IntLaurentPoly::one());
    }

    #[test]
    fn trefoil_both_routes() {
        let t = trefoil();
        assert_eq!(conway_skein(&t), z(&[(0, 1), (2, 1)]));
        assert_eq!(conway_via_alexander(&t).unwrap(), z(&[(0, 1), (2, 1)]));
        assert_eq!(casson_c2(&conway_skein(&t)).unwrap(), 1);
    }

    #[test]
    fn mirror_trefoil_same_conway() {
        let t = trefoil();
        let mut m = t.clone();
        for k in 0..3 {
            m = m.switch(k);
        }
        assert_eq!(conway_skein(&m), z(&[(0, 1), (2, 1)]));
    }

    #[test]
    fn hopf_link_is_z() {
        let hopf = crate::link::tests::hopf();
        assert_eq!(hopf.component_count(), 2);
        let p = conway_skein(&hopf);
        assert_eq!(p.coeff(1).abs(), 1);
        assert!(lowest_coefficient_ok(&hopf, &p));
    }

    #[test]
    fn theorem_on_small_divides() {
        use crate::moves::SearchBudget;
        for (w, c2) in [("left 1 /  / right 1", 0), ("left 1 / b 1; x 2; d 1 / right 1", 1)] {
            let d = crate::divide::validate(&crate::word::DivideWord::from_compact("t", w).unwrap()).unwrap();
            let r = verify_theorem(&d, None, SearchBudget::default()).unwrap();
            assert_eq!((r.c2_skein, r.j2), (c2, Some(c2)));
            assert_eq!((r.theorem, r.corollary), (Verdict::Pass, Verdict::Pass));
        }
        let two = crate::divide::validate(&crate::word::DivideWord::from_compact("t", "left 2 / x 1 / right 2").unwrap()).unwrap();
        assert!(matches!(verify_theorem(&two, None, SearchBudget::default()), Err(TheoremError::Divide(_))));
    }

    #[test]
    fn odd_powers_rejected() {
        assert_eq!(casson_c2(&z(&[(1, 1)])), Err(PolyError::OddPower(1)));
        assert_eq!(arf(5), 1);
        assert_eq!(arf(-3), 1);
        assert_eq!(arf(0), 0);
    }
}
