//! Independent computations checked against the library.

use fano3_core::ci_models::{cone_grassmannian_section, factorial_ci_models, wci_invariants, FACTORIAL_CI_EXPECTED};
use fano3_core::constraints::{d2_system_solutions, diophantine_no_bcd, fundamental_system_dimension};
use fano3_core::fano_db::{rho1_all, rho1_lookup};
use fano3_core::lattice::{pbundle_chow, product_chow, BundleBase, DivisorClass};
use proptest::prelude::*;

/// Complete homogeneous symmetric polynomial `h_k(a)`.
fn complete_homogeneous(a: &[i64], k: usize) -> i64 {
    if k == 0 {
        return 1;
    }
    match a.split_first() {
        None => 0,
        Some((&x, rest)) => (0..=k)
            .map(|j| x.pow(j as u32) * complete_homogeneous(rest, k - j))
            .sum(),
    }
}

/// Elementary symmetric polynomials `(e₁, e₂)`.
fn elementary(a: &[i64]) -> (i64, i64) {
    let e1 = a.iter().sum();
    let mut e2 = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            e2 += a[i] * a[j];
        }
    }
    (e1, e2)
}

proptest! {
    /// For `p_*O(M) = ⊕O(aⱼ)` the top monomials are `M^{r−1+k}H^{b−k} = h_k(a)`,
    /// and the relation `Π(M − aⱼH) = 0` fixes `c₁ = −e₁`, `c₂ = e₂`.
    #[test]
    fn split_bundle_segre_numbers(a in prop::collection::vec(-3i64..=3, 2..=4), over_p2 in any::<bool>()) {
        let base = if over_p2 { BundleBase::P2 } else { BundleBase::P1 };
        let b = base.dim();
        let r = a.len();
        let (e1, e2) = elementary(&a);
        let form = pbundle_chow(base, r, -e1, e2).unwrap();
        for k in 0..=b {
            let mut idx = vec![0usize; r - 1 + k];
            idx.extend(std::iter::repeat_n(1usize, b - k));
            prop_assert_eq!(form.monomial(&idx).unwrap(), complete_homogeneous(&a, k));
        }
    }
}

/// Chern classes of `i_*L` for a line bundle of degree `e` on a smooth conic
/// `C ⊂ P²`, from Hirzebruch-Riemann-Roch: `c₁ = 2h` and
/// `χ = (c₁² − 2c₂)/2 + (3/2)c₁·h = e + 1`.
fn conic_sheaf_chern(e: i64) -> (i64, i64) {
    let c1 = 2;
    // (4 − 2c₂)/2 + 3 = e + 1
    let c2 = 4 - e;
    (c1, c2)
}

/// `c(E) = c(F)⁻¹` modulo `h³` for `0 → E → O² → F → 0`.
fn kernel_chern(f: (i64, i64)) -> (i64, i64) {
    let (f1, f2) = f;
    (-f1, f1 * f1 - f2)
}

#[test]
fn conic_kernel_bundle_degree() {
    let (c1, c2) = kernel_chern(conic_sheaf_chern(5));
    assert_eq!((c1, c2), (-2, 5));
    let form = pbundle_chow(BundleBase::P2, 2, c1, c2).unwrap();
    // −K = 2M + (3 + c₁)H
    assert_eq!(form.anticanonical(), &DivisorClass::from([2, 1]));
    assert_eq!(form.anticanonical_degree().unwrap(), 22);
}

/// Coefficient of `x^{dz}y^k` in `(x + y)³·Π(aᵢx + bᵢy)` times `deg`.
fn product_oracle(deg: i64, dz: usize, k: usize, eqs: &[(i64, i64)]) -> i64 {
    let mut poly = vec![1i64];
    let mut mul = |a: i64, b: i64| {
        let mut next = vec![0i64; poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] += c * a;
            next[i] += c * b;
        }
        poly = next;
    };
    for _ in 0..3 {
        mul(1, 1);
    }
    for &(a, b) in eqs {
        mul(a, b);
    }
    // poly[i] is the coefficient of x^i y^{n−i}
    assert_eq!(poly.len() - 1, dz + k);
    deg * poly[dz]
}

proptest! {
    #[test]
    fn product_form_matches_binomial_expansion(
        deg in 1i64..=6,
        eqs in prop::collection::vec((0i64..=3, 0i64..=3), 1..=3),
    ) {
        let k = eqs.len();
        let form = product_chow(deg, k).unwrap();
        let kk = form.anticanonical().clone();
        let classes: Vec<DivisorClass> = eqs.iter().map(|&(a, b)| DivisorClass::from([a, b])).collect();
        let mut all = vec![&kk; 3];
        all.extend(classes.iter());
        prop_assert_eq!(form.top_product(&all).unwrap(), product_oracle(deg, 3, k, &eqs));
    }
}

fn isqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt().round() as i64;
    (r - 1..=r + 1).find(|x| *x >= 0 && x * x == n)
}

/// All integer `(a, b)` with `a²k − 2b² = −2` and `ak − 2b = c`: substituting
/// `b = (ak − c)/2` leaves `k(2 − k)a² + 2kca + 4 − c² = 0`.
fn pell_with_line(k: i64, c: i64) -> Vec<(i64, i64)> {
    let (qa, qb, qc) = (k * (2 - k), 2 * k * c, 4 - c * c);
    let disc = qb * qb - 4 * qa * qc;
    let Some(s) = isqrt(disc) else { return Vec::new() };
    let mut out = Vec::new();
    for num in [-qb + s, -qb - s] {
        if num % (2 * qa) == 0 {
            let a = num / (2 * qa);
            if (a * k - c) % 2 == 0 {
                out.push((a, (a * k - c) / 2));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[test]
fn no_bcd_closed_form() {
    let reports = diophantine_no_bcd(&[7, 8, 9, 10]).unwrap();
    let by_name = |n: &str| reports.iter().find(|r| r.lemma == format!("no-bcd/{n}")).unwrap();
    for g in 7..=10 {
        let k = 2 * g - 2;
        // Type D: b² = (g − 1)a², so only g = 10 has nonzero solutions,
        // b = ±3a, and then ak − 2b ∈ {12a, 24a} misses 1..=9.
        if let Some(s) = isqrt(g - 1) {
            for a in -20i64..=20 {
                for b in [s * a, -s * a] {
                    assert!(a == 0 || !(1..=9).contains(&(a * k - 2 * b)));
                }
            }
        }
        // Type C: m² = g − 2.
        assert!(isqrt(g - 2).is_none_or(|m| m < 2));
        for (name, c) in [("B2", 4), ("B1_0", 2), ("B_half", 1)] {
            let exact: Vec<Vec<i64>> = pell_with_line(k, c).into_iter().map(|(a, b)| vec![g, a, b]).collect();
            let r = by_name(name);
            let mut found: Vec<Vec<i64>> = r.solutions.iter().filter(|s| s[0] == g).cloned().collect();
            found.extend(r.rejected.iter().filter(|s| s.0[0] == g).map(|s| s.0.clone()));
            found.sort();
            assert_eq!(found, exact, "{name}, g = {g}");
        }
    }
    assert!(reports.iter().all(|r| r.is_excluded()));
}

#[test]
fn d2_system_closed_form() {
    // e = 2t − 1 − h, then g − 1 = 4(2h − 1 − 3t).
    let solve = |g: i64, h: i64| {
        let num = 2 * h - 1 - (g - 1) / 4;
        ((g - 1) % 4 == 0 && num % 3 == 0).then(|| (num / 3, 2 * (num / 3) - 1 - h))
    };
    assert_eq!(solve(9, 3), Some((1, -2)));
    assert_eq!(solve(5, 14), None);
    assert_eq!(d2_system_solutions(&[(5, 14), (9, 3)], 50), vec![(1, -2, 9, 3)]);
}

#[test]
fn fundamental_system_dimensions() {
    // P³: 3, Q³: 4, del Pezzo of degree d: d + 1.
    assert_eq!(fundamental_system_dimension(4, 33).unwrap(), 3);
    assert_eq!(fundamental_system_dimension(3, 28).unwrap(), 4);
    for d in 1..=5 {
        assert_eq!(fundamental_system_dimension(2, 4 * d + 1).unwrap(), d + 1);
    }
}

#[test]
fn weighted_models_match_rank_one_table() {
    for ((label, ci), (iota, value)) in factorial_ci_models().iter().zip(FACTORIAL_CI_EXPECTED) {
        let inv = wci_invariants(ci).unwrap();
        assert_eq!((inv.iota, inv.genus_or_degree), (iota, value), "{label}");
        let genus = inv.mk3 / 2 + 1;
        assert!(rho1_lookup(iota, genus).is_ok(), "{label}");
    }
    let m6 = cone_grassmannian_section(&[1, 1, 1, 2]).unwrap();
    assert_eq!(m6.mk3, 10);
    assert_eq!(rho1_lookup(1, m6.genus_or_degree).unwrap().family.mk3, 10);
}

#[test]
fn rank_one_table_degrees() {
    for r in rho1_all() {
        let f = &r.family;
        assert_eq!(f.mk3 % (f.iota * f.iota * f.iota), 0, "{}", f.label);
    }
}
