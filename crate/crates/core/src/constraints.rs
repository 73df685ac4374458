//! Eliminations by exhaustive search over small integer domains.
//!
//! Every search is run first; analytic side conditions are applied afterwards
//! as filters whose rejections are kept in the report.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::contractions::{link_transform, ContractionKind, Target};
use crate::error::{add, div_exact, mul, sub, Error, Result};
use crate::fano_db::{index_one_genera, rho1_all, rho1_lookup, rho2_lookup, SmoothFanoRecord, RHO1_TABLE};
use crate::invariants::{degree_of, genus_of, h0_fundamental};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Excluded,
    WitnessesFound,
}

/// Outcome of one elimination search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationReport {
    pub lemma: String,
    pub search_space: String,
    pub solutions: Vec<Vec<i64>>,
    /// Roots of the search removed by a side condition, with the reason.
    pub rejected: Vec<(Vec<i64>, String)>,
    pub verdict: Verdict,
}

impl EliminationReport {
    pub fn new(
        lemma: impl Into<String>,
        search_space: impl Into<String>,
        solutions: Vec<Vec<i64>>,
        rejected: Vec<(Vec<i64>, String)>,
    ) -> Self {
        let verdict = if solutions.is_empty() {
            Verdict::Excluded
        } else {
            Verdict::WitnessesFound
        };
        Self {
            lemma: lemma.into(),
            search_space: search_space.into(),
            solutions,
            rejected,
            verdict,
        }
    }

    pub fn is_excluded(&self) -> bool {
        self.verdict == Verdict::Excluded
    }
}

impl fmt::Display for EliminationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.verdict {
            Verdict::Excluded => "excluded",
            Verdict::WitnessesFound => "witnesses found",
        };
        write!(
            f,
            "{}: {verdict}; {} witnesses in {}",
            self.lemma,
            self.solutions.len(),
            self.search_space
        )?;
        for s in &self.solutions {
            write!(f, "\n  witness {s:?}")?;
        }
        for (s, why) in &self.rejected {
            write!(f, "\n  rejected {s:?}: {why}")?;
        }
        Ok(())
    }
}

/// `(ι, g, h)` triple of a rank-one family.
pub type Rho1Triple = (i64, i64, i64);

/// Pairs `(X, Z)` with `g(X) = g(Z) − 4` and `h(X) = h(Z)`; with
/// `genus_only` the Hodge condition is dropped.
pub fn check_b2_over(db: &[Rho1Triple], genus_only: bool) -> EliminationReport {
    let mut solutions = Vec::new();
    for &(ix, gx, hx) in db {
        for &(iz, gz, hz) in db {
            if gx == gz - 4 && (genus_only || hx == hz) {
                solutions.push(vec![ix, gx, hx, iz, gz, hz]);
            }
        }
    }
    let space = format!(
        "{n}x{n} pairs (X, Z) of rank-one families{}",
        if genus_only { ", genus condition only" } else { "" },
        n = db.len()
    );
    EliminationReport::new("no-b2", space, solutions, Vec::new())
}

/// No contraction of a small resolution is the blowup of a smooth point.
pub fn check_b2_excluded() -> EliminationReport {
    check_b2_over(&RHO1_TABLE, false)
}

/// The three searches ruling out index-one targets for `B1` contractions.
/// `target_indices` lists the admissible indices of `Z`; the claim uses `{1}`.
pub fn check_index1_blowup_over(target_indices: &[i64]) -> EliminationReport {
    let xs: Vec<Rho1Triple> = RHO1_TABLE.iter().copied().filter(|r| r.0 == 1).collect();
    let zs: Vec<Rho1Triple> = RHO1_TABLE
        .iter()
        .copied()
        .filter(|r| target_indices.contains(&r.0))
        .collect();
    let mut solutions = Vec::new();
    let mut rejected = Vec::new();
    for &(_, gx, hx) in &xs {
        for &(iz, gz, hz) in &zs {
            // B1_0: the smoothing of Z has the genus of X and one more h12.
            if gx == gz && hx == hz - 1 {
                solutions.push(vec![0, gx, hx, iz, gz, hz]);
            }
            // B1_1 with a rational curve: h(X) = h(Z).
            if hx == hz {
                let iota_deg = (gz - hz) - (gx - hx) - 1;
                if iota_deg > 0 && iota_deg % iz == 0 {
                    solutions.push(vec![1, gx, hx, iz, gz, hz]);
                } else {
                    rejected.push((
                        vec![1, gx, hx, iz, gz, hz],
                        format!("iota(Z)*deg = {iota_deg} is not a positive multiple of {iz}"),
                    ));
                }
            }
            // B1_1 with a curve of positive genus.
            if gx + hx < gz + hz && hx > hz {
                solutions.push(vec![2, gx, hx, iz, gz, hz]);
            }
        }
    }
    let space = format!(
        "branches B1_0 / B1_1 genus 0 / B1_1 genus > 0 over {}x{} pairs, iota(Z) in {target_indices:?}",
        xs.len(),
        zs.len()
    );
    EliminationReport::new("index1-blowup", space, solutions, rejected)
}

pub fn check_index1_blowup_excluded() -> EliminationReport {
    check_index1_blowup_over(&[1])
}

/// Input of the `H²·H_i` formula, one variant per contraction type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HhhCase {
    /// Blowup of a curve on `Z`; `(g, h)` are the invariants of the smoothing
    /// of the nodal threefold.
    CurveBlowup {
        g_z: i64,
        h_z: i64,
        iota_z: i64,
        g: i64,
        h: i64,
    },
    /// Blowup of the node of `Z`; `(g_zsm, h_zsm)` belong to its smoothing.
    PointBlowup {
        g_zsm: i64,
        h_zsm: i64,
        iota_z: i64,
        g: i64,
        h: i64,
    },
    ConicBundle {
        disc_degree: i64,
    },
    DelPezzo {
        fiber_degree: i64,
    },
}

impl HhhCase {
    pub fn kind(&self) -> ContractionKind {
        match self {
            HhhCase::CurveBlowup { .. } => ContractionKind::B1Curve,
            HhhCase::PointBlowup { .. } => ContractionKind::B1Point,
            HhhCase::ConicBundle { .. } => ContractionKind::C1,
            HhhCase::DelPezzo { .. } => ContractionKind::D1,
        }
    }
}

/// `H²·H_i` for an index-one contraction of a small resolution.
pub fn hhh_value(case: HhhCase) -> Result<i64> {
    match case {
        HhhCase::CurveBlowup { g_z, h_z, iota_z, g, h } => {
            let num = sub(add(add(g_z, h_z)?, sub(g, h)?)?, 1)?;
            div_exact(num, iota_z, "(g(Z) + h(Z)) + (g - h) - 1")
        }
        HhhCase::PointBlowup {
            g_zsm,
            h_zsm,
            iota_z,
            g,
            h,
        } => {
            let num = sub(add(add(g_zsm, h_zsm)?, sub(g, h)?)?, 2)?;
            div_exact(num, iota_z, "(g(Zsm) + h(Zsm)) + (g - h) - 2")
        }
        HhhCase::ConicBundle { disc_degree } => sub(12, disc_degree),
        HhhCase::DelPezzo { fiber_degree } => Ok(fiber_degree),
    }
}

/// Whether `value` respects the bounds: at least 4 for blowups, at most
/// `2g − 4` when `g ≥ 7`.
pub fn hhh_within_bounds(kind: ContractionKind, value: i64, g: i64) -> bool {
    let lower = !kind.is_birational() || value >= 4;
    let upper = g < 7 || value <= 2 * g - 4;
    lower && upper
}

/// `α = (v₁ + v₂)/(2g − 2)`.
pub fn alpha_of(g: i64, v1: i64, v2: i64) -> Result<i64> {
    div_exact(add(v1, v2)?, sub(mul(2, g)?, 2)?, "H^2.H1 + H^2.H2")
}

/// Scan of all realizable blowup pairs `(X^sm, Z)` with `ι(X^sm) = 1`,
/// `ι(Z) ≥ 2` and `h(X^sm) ≥ h(Z)`, reporting those outside the `H²·H_i`
/// bounds. Curve blowups must have positive degree and satisfy
/// `ι(Z)·deg(Γ) > 2g(Γ) − 2`.
pub fn hhh_bound_scan() -> Result<EliminationReport> {
    let mut solutions = Vec::new();
    let mut rejected = Vec::new();
    let mut checked = 0;
    for &(ix, g, h) in RHO1_TABLE.iter().filter(|r| r.0 == 1) {
        for &(iz, gz, hz) in RHO1_TABLE.iter().filter(|r| r.0 >= 2) {
            if h < hz {
                continue;
            }
            let g_gamma = h - hz;
            let iota_deg = (gz - hz) - (g - h) - 1;
            let tuple = vec![ix, g, h, iz, gz, hz];
            if iota_deg <= 0 || iota_deg % iz != 0 || iota_deg <= 2 * g_gamma - 2 {
                rejected.push((
                    tuple.clone(),
                    format!("no curve: iota*deg = {iota_deg}, g(curve) = {g_gamma}"),
                ));
            } else {
                checked += 1;
                let v = hhh_value(HhhCase::CurveBlowup {
                    g_z: gz,
                    h_z: hz,
                    iota_z: iz,
                    g,
                    h,
                })?;
                if !hhh_within_bounds(ContractionKind::B1Curve, v, g) {
                    solutions.push([tuple.clone(), vec![0, v]].concat());
                }
            }
            // Blowup of the node of a singular degeneration of Z.
            if h == hz - 1 && g == gz - 1 {
                checked += 1;
                if let Ok(v) = hhh_value(HhhCase::PointBlowup {
                    g_zsm: gz,
                    h_zsm: hz,
                    iota_z: iz,
                    g,
                    h,
                }) {
                    if !hhh_within_bounds(ContractionKind::B1Point, v, g) {
                        solutions.push([tuple, vec![1, v]].concat());
                    }
                }
            }
        }
    }
    Ok(EliminationReport::new(
        "hhh-bounds",
        format!("{checked} realizable blowup pairs with iota(X) = 1, iota(Z) >= 2"),
        solutions,
        rejected,
    ))
}

/// Contraction type tested against the factorial link of genus 7 to 10.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BcdType {
    D,
    B2,
    B1Point,
    BHalf,
    C,
}

impl BcdType {
    pub const ALL: [BcdType; 5] = [BcdType::D, BcdType::B2, BcdType::B1Point, BcdType::BHalf, BcdType::C];

    pub fn as_str(self) -> &'static str {
        match self {
            BcdType::D => "D",
            BcdType::B2 => "B2",
            BcdType::B1Point => "B1_0",
            BcdType::BHalf => "B_half",
            BcdType::C => "C",
        }
    }
}

/// Brute force over `|a|, |b| ≤ bound` of the intersection systems for
/// `H₊ ~ aH − bE` (type D, C) or `E₊ ~ aH − bE` (types B).
pub fn diophantine_no_bcd_within(g_set: &[i64], bound: i64) -> Result<Vec<EliminationReport>> {
    if let Some(g) = g_set.iter().find(|g| !(7..=10).contains(*g)) {
        return Err(Error::InvalidArgument(format!("genus {g} not in 7..=10")));
    }
    let space = |extra: &str| format!("|a|, |b| <= {bound}, g in {g_set:?}{extra}");
    let mut reports = Vec::new();
    for ty in BcdType::ALL {
        let mut solutions = Vec::new();
        let mut rejected = Vec::new();
        for &g in g_set {
            let k = 2 * g - 2;
            if ty == BcdType::C {
                // H₊ ~ H − mE with H₊²·(−K) = 2.
                for m in 2..=bound {
                    if k - 2 * m * m == 2 {
                        solutions.push(vec![g, m]);
                    }
                }
                continue;
            }
            for a in -bound..=bound {
                for b in -bound..=bound {
                    let quad = a * a * k - 2 * b * b;
                    let lin = a * k - 2 * b;
                    let hit = match ty {
                        // H₊²·(−K) = 0 and H₊·(−K)² is a fiber degree.
                        BcdType::D => quad == 0 && (1..=9).contains(&lin) && (a, b) != (0, 0),
                        BcdType::B2 => quad == -2 && lin == 4,
                        BcdType::B1Point => quad == -2 && lin == 2,
                        BcdType::BHalf => quad == -2 && lin == 1,
                        BcdType::C => unreachable!(),
                    };
                    if !hit {
                        continue;
                    }
                    if ty == BcdType::B1Point && (a, b) == (0, -1) {
                        rejected.push((vec![g, a, b], "E+ ~ E".to_string()));
                    } else {
                        solutions.push(vec![g, a, b]);
                    }
                }
            }
        }
        let extra = if ty == BcdType::C { ", m in 2..=bound" } else { "" };
        reports.push(EliminationReport::new(
            format!("no-bcd/{}", ty.as_str()),
            space(extra),
            solutions,
            rejected,
        ));
    }
    Ok(reports)
}

pub fn diophantine_no_bcd(g_set: &[i64]) -> Result<Vec<EliminationReport>> {
    diophantine_no_bcd_within(g_set, 200)
}

/// All `(t, e, g, h)` with `4(t − 3 − 2e) + 1 = g` and `2t − e − 1 = h` for
/// `(g, h)` among `candidates` and `t, e` in `range`.
pub fn d2_system_solutions(candidates: &[(i64, i64)], range: i64) -> Vec<(i64, i64, i64, i64)> {
    let mut out = Vec::new();
    for &(g, h) in candidates {
        for t in -range..=range {
            for e in -range..=range {
                if 4 * (t - 3 - 2 * e) + 1 == g && 2 * t - e - 1 == h {
                    out.push((t, e, g, h));
                }
            }
        }
    }
    out
}

/// The unique solution of the quadric bundle system.
pub fn solve_d2_system() -> Result<(i64, i64, i64, i64)> {
    match d2_system_solutions(&[(5, 14), (9, 3)], 20).as_slice() {
        [s] => Ok(*s),
        other => Err(Error::Inconsistent(format!("expected one solution, found {other:?}"))),
    }
}

/// Whether a rank-one family admits a factorial one-nodal degeneration.
pub fn factorial_gate(record: &SmoothFanoRecord) -> bool {
    let f = &record.family;
    f.h12 >= 1 && ((f.iota == 1 && f.genus() <= 10) || (f.iota == 2 && f.degree() <= 4))
}

/// `dim|H − 2E| = g − 4` on the blowup of the node.
pub fn h2e_dimension(g: i64) -> Result<i64> {
    if g < 5 {
        return Err(Error::InvalidArgument(format!("genus {g} below 5")));
    }
    sub(g, 4)
}

/// Dimension of the fundamental linear system of a rank-one family.
pub fn fundamental_system_dimension(iota: i64, genus: i64) -> Result<i64> {
    let mk3 = crate::invariants::mk3_of_genus(genus)?;
    degree_of(mk3, iota)?;
    sub(h0_fundamental(iota, mk3)?, 1)
}

/// Outcome of the survival test for one rank-two family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status", content = "detail")]
pub enum MStatus {
    Pass,
    /// A contraction has index greater than one.
    LargeIndex(String),
    /// A contraction is the blowup of a singular point.
    SingularTarget(String),
    /// A blown up curve has genus below `ι(Z) − 1`.
    CurveGenusTooSmall(String),
    /// `g(2-m) + 1` is not an index-one genus of the rank-one table.
    GenusOutOfRange(i64),
}

impl MStatus {
    pub fn passes(&self) -> bool {
        *self == MStatus::Pass
    }
}

/// First failing condition for each `m`, in the order: index, singular
/// target, curve genus, genus range.
pub fn genus_bound_demo(m_range: impl IntoIterator<Item = i64>) -> Result<Vec<(i64, MStatus)>> {
    let genera: BTreeSet<i64> = index_one_genera().into_iter().collect();
    m_range
        .into_iter()
        .map(|m| {
            let rec = rho2_lookup(m)?;
            let status = m_status(&rec, &genera)?;
            Ok((m, status))
        })
        .collect()
}

fn m_status(rec: &SmoothFanoRecord, genera: &BTreeSet<i64>) -> Result<MStatus> {
    for c in &rec.contractions {
        if crate::contractions::iota_of(c.kind) > 1 {
            return Ok(MStatus::LargeIndex(c.kind.to_string()));
        }
    }
    for c in &rec.contractions {
        if c.kind == ContractionKind::B1Point {
            return Ok(MStatus::SingularTarget(c.target.label()));
        }
    }
    for c in &rec.contractions {
        if let (ContractionKind::B1Curve, Some((g, d)), Target::Family { iota, .. }) = (c.kind, c.curve, c.target) {
            if g < iota - 1 {
                return Ok(MStatus::CurveGenusTooSmall(format!("curve ({g}, {d}) on {}", c.target)));
            }
            // The transform must exist as well.
            link_transform(c, iota)?;
        }
    }
    let g = add(genus_of(rec.family.mk3)?, 1)?;
    if !genera.contains(&g) {
        return Ok(MStatus::GenusOutOfRange(g));
    }
    Ok(MStatus::Pass)
}

/// Candidates `X₊` for the factorial link of genus `g`: smooth rank-one
/// families of index at least 2 with `dim|H₊| = g − 4` and
/// `h(X₊) ≤ h(X) − 1`.
pub fn factorial_xplus_candidates(g: i64) -> Result<Vec<SmoothFanoRecord>> {
    let target_dim = h2e_dimension(g)?;
    let h = rho1_lookup(1, g)?.h12();
    let mut out = Vec::new();
    for rec in rho1_all().into_iter().filter(|r| r.iota() >= 2) {
        if fundamental_system_dimension(rec.iota(), rec.genus())? == target_dim && rec.h12() < h {
            out.push(rec);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hhh_examples() {
        let v = hhh_value(HhhCase::CurveBlowup {
            g_z: 28,
            h_z: 0,
            iota_z: 3,
            g: 9,
            h: 3,
        })
        .unwrap();
        assert_eq!(v, 11);
        assert_eq!(hhh_value(HhhCase::DelPezzo { fiber_degree: 5 }).unwrap(), 5);
        assert_eq!(hhh_value(HhhCase::ConicBundle { disc_degree: 7 }).unwrap(), 5);
        assert!(hhh_value(HhhCase::CurveBlowup {
            g_z: 28,
            h_z: 0,
            iota_z: 3,
            g: 9,
            h: 4,
        })
        .is_err());
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_of(9, 11, 5).unwrap(), 1);
        assert_eq!(alpha_of(12, 11, 11).unwrap(), 1);
        assert_eq!(alpha_of(12, 11, 33).unwrap(), 2);
        assert!(alpha_of(12, 11, 12).is_err());
    }

    #[test]
    fn gate_examples() {
        assert!(!factorial_gate(&rho1_lookup(1, 12).unwrap()));
        assert!(!factorial_gate(&rho1_lookup(2, 21).unwrap()));
        assert!(factorial_gate(&rho1_lookup(1, 2).unwrap()));
    }

    #[test]
    fn h2e_examples() {
        assert_eq!(h2e_dimension(10).unwrap(), 6);
        assert_eq!(h2e_dimension(7).unwrap(), 3);
        assert!(h2e_dimension(4).is_err());
    }

    #[test]
    fn d2_unique() {
        assert_eq!(solve_d2_system().unwrap(), (1, -2, 9, 3));
        assert!(d2_system_solutions(&[(5, 14)], 20).is_empty());
    }

    #[test]
    fn empty_database_scan_is_excluded() {
        assert!(check_b2_over(&[], false).is_excluded());
    }

    #[test]
    fn no_bcd_rejects_out_of_range_genus() {
        assert!(diophantine_no_bcd(&[6]).is_err());
    }
}
