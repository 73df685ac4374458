//! Invariants of complete intersections in weighted projective spaces, in
//! Mukai varieties and in products `Z₁ × P^k`.

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{add, mul, pow, sub, Error, Result};
use crate::fano_db::mukai_degree;
use crate::invariants::{degree_of, genus_of};
use crate::lattice::{product_chow_over, DivisorClass};

/// Complete intersection of hypersurfaces of degrees `degrees` in
/// `P(weights)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightedCI {
    pub weights: Vec<i64>,
    pub degrees: Vec<i64>,
}

impl WeightedCI {
    /// Checks positivity, positive dimension, the Fano condition and
    /// well-formedness of the weights.
    pub fn new(weights: Vec<i64>, degrees: Vec<i64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().chain(&degrees).any(|&x| x < 1) {
            return Err(Error::InvalidArgument("weights and degrees must be positive".into()));
        }
        if degrees.len() + 1 >= weights.len() {
            return Err(Error::InvalidArgument(format!(
                "{} equations in P of dimension {} leave no positive dimension",
                degrees.len(),
                weights.len() - 1
            )));
        }
        let sw: i64 = weights.iter().sum();
        let sd: i64 = degrees.iter().sum();
        if sw <= sd {
            return Err(Error::InvalidArgument(format!(
                "sum of weights {sw} must exceed sum of degrees {sd}"
            )));
        }
        for i in 0..weights.len() {
            let g = weights
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(0i64, |acc, (_, &w)| acc.gcd(&w));
            if g != 1 {
                return Err(Error::InvalidArgument(format!(
                    "weights {weights:?} are not well formed: dropping entry {i} leaves gcd {g}"
                )));
            }
        }
        Ok(Self { weights, degrees })
    }

    pub fn dimension(&self) -> usize {
        self.weights.len() - 1 - self.degrees.len()
    }
}

/// Invariants of a Fano threefold: `(−K)³`, index, and the genus for index
/// one or the degree otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiInvariants {
    pub mk3: i64,
    pub iota: i64,
    pub genus_or_degree: i64,
}

fn finish(mk3: Ratio<i64>, iota: i64) -> Result<CiInvariants> {
    if !mk3.is_integer() {
        return Err(Error::NotDivisible {
            what: format!("(-K)^3 = {mk3}"),
            by: 1,
        });
    }
    let mk3 = mk3.to_integer();
    let genus_or_degree = if iota == 1 {
        genus_of(mk3)?
    } else {
        degree_of(mk3, iota)?
    };
    Ok(CiInvariants {
        mk3,
        iota,
        genus_or_degree,
    })
}

/// Adjunction: `ι = Σw − Σd` and `(−K)³ = ι³·Πd/Πw`.
pub fn wci_invariants(ci: &WeightedCI) -> Result<CiInvariants> {
    if ci.dimension() != 3 {
        return Err(Error::InvalidArgument(format!(
            "complete intersection has dimension {}, not 3",
            ci.dimension()
        )));
    }
    let iota = sub(ci.weights.iter().sum(), ci.degrees.iter().sum())?;
    let pd = ci.degrees.iter().try_fold(1i64, |a, &d| mul(a, d))?;
    let pw = ci.weights.iter().try_fold(1i64, |a, &w| mul(a, w))?;
    finish(Ratio::new(mul(pow(iota, 3)?, pd)?, pw), iota)
}

/// The weighted complete intersections with one node or cusp in their
/// families, as `(label, model)`.
pub fn factorial_ci_models() -> Vec<(&'static str, WeightedCI)> {
    let m = |w: &[i64], d: &[i64]| WeightedCI::new(w.to_vec(), d.to_vec()).expect("listed model is valid");
    vec![
        ("X6 in P(1^3,2,3)", m(&[1, 1, 1, 2, 3], &[6])),
        ("X4 in P(1^4,2)", m(&[1, 1, 1, 1, 2], &[4])),
        ("X3 in P4", m(&[1, 1, 1, 1, 1], &[3])),
        ("X2,2 in P5", m(&[1, 1, 1, 1, 1, 1], &[2, 2])),
        ("X6 in P(1^4,3)", m(&[1, 1, 1, 1, 3], &[6])),
        ("X2,4 in P(1^5,2)", m(&[1, 1, 1, 1, 1, 2], &[2, 4])),
        ("X2,3 in P5", m(&[1, 1, 1, 1, 1, 1], &[2, 3])),
        ("X2,2,2 in P6", m(&[1, 1, 1, 1, 1, 1, 1], &[2, 2, 2])),
    ]
}

/// `(ι, d)` for index two and `(1, g)` for index one, matching the order of
/// [`factorial_ci_models`].
pub const FACTORIAL_CI_EXPECTED: [(i64, i64); 8] = [(2, 1), (2, 2), (2, 3), (2, 4), (1, 2), (1, 3), (1, 4), (1, 5)];

/// Dimension, degree and index of the cone over `Gr(2,5)` in `P¹⁰`.
pub const CONE_GR25: (usize, i64, i64) = (7, 5, 6);

/// Invariants of a complete intersection of hypersurfaces of degrees
/// `degrees` in the cone over `Gr(2,5)`.
pub fn cone_grassmannian_section(degrees: &[i64]) -> Result<CiInvariants> {
    let (dim, deg, index) = CONE_GR25;
    if degrees.iter().any(|&d| d < 1) || dim.checked_sub(degrees.len()) != Some(3) {
        return Err(Error::InvalidArgument(format!(
            "degrees {degrees:?} do not cut a threefold out of a {dim}-dimensional cone"
        )));
    }
    let iota = sub(index, degrees.iter().sum())?;
    if iota < 1 {
        return Err(Error::InvalidArgument(format!("section has index {iota}")));
    }
    let pd = degrees.iter().try_fold(1i64, |a, &d| mul(a, d))?;
    finish(Ratio::from_integer(mul(mul(pow(iota, 3)?, deg)?, pd)?), iota)
}

/// Dimension of the homogeneous Mukai variety `M_g`.
pub fn mukai_dimension(g: i64) -> Result<i64> {
    match g {
        7 => Ok(10),
        8 => Ok(8),
        9 => Ok(6),
        10 => Ok(5),
        _ => Err(Error::InvalidArgument(format!(
            "no homogeneous Mukai variety of genus {g}"
        ))),
    }
}

/// Genus of a threefold linear section of `M_g` of codimension `codim`.
pub fn mukai_section_genus(g: i64, codim: i64) -> Result<i64> {
    let dim = mukai_dimension(g)?;
    if codim != dim - 3 {
        return Err(Error::InvalidArgument(format!(
            "codimension {codim} does not cut a threefold from M_{g} of dimension {dim}"
        )));
    }
    genus_of(mukai_degree(g)?)
}

/// Weakly decreasing tuples of `parts` positive integers summing to `total`.
pub fn partitions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    fn go(total: i64, parts: usize, max: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts == 0 {
            if total == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for v in (1..=max.min(total)).rev() {
            acc.push(v);
            go(total - v, parts - 1, v, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 && total >= 0 {
        go(total, parts, total, &mut Vec::new(), &mut out);
    }
    out
}

/// Bidegrees `(aᵢ, bᵢ)` of a complete intersection of dimension 3 in
/// `Z₁ × P^k` with `Σaᵢ = ι(Z₁) − 1` and `Σbᵢ = k`, sorted ascending.
pub fn ci_exponents(iota_z1: i64, dim_z1: i64, k: i64) -> Result<Vec<(i64, i64)>> {
    let n = dim_z1 + k - 3;
    if n < 1 {
        return Err(Error::InvalidArgument(format!(
            "Z1 x P^{k} with dim Z1 = {dim_z1} needs no equations"
        )));
    }
    let n = n as usize;
    let a = partitions(iota_z1 - 1, n);
    let b = partitions(k, n);
    let (a, b) = match (a.as_slice(), b.as_slice()) {
        ([a], [b]) => (a.clone(), b.clone()),
        _ => {
            return Err(Error::Inconsistent(format!(
                "{} exponent choices for index {iota_z1} and {} for k = {k}",
                a.len(),
                b.len()
            )))
        }
    };
    let varies = |v: &[i64]| v.windows(2).any(|w| w[0] != w[1]);
    if varies(&a) && varies(&b) {
        return Err(Error::Inconsistent(format!("pairing of {a:?} with {b:?} is ambiguous")));
    }
    let mut out: Vec<(i64, i64)> = a.into_iter().zip(b).collect();
    out.sort();
    Ok(out)
}

/// `(−K)³` and genus of `X̄ ⊂ Z₁ × P^k` cut out by `bidegrees`, with
/// `−K_X̄ = H₁ + H₂`. The dimension of `Z₁` is read off the number of
/// equations.
pub fn product_ci_invariants(deg_z1: i64, iota_z1: i64, k: i64, bidegrees: &[(i64, i64)]) -> Result<(i64, i64)> {
    if bidegrees.iter().any(|&(a, b)| a < 1 || b < 1) {
        return Err(Error::InvalidArgument(format!("bidegrees {bidegrees:?} must be ample")));
    }
    let sa: i64 = bidegrees.iter().map(|p| p.0).sum();
    let sb: i64 = bidegrees.iter().map(|p| p.1).sum();
    if sa != iota_z1 - 1 || sb != k {
        return Err(Error::InvalidArgument(format!(
            "bidegree sums ({sa}, {sb}) differ from ({}, {k})",
            iota_z1 - 1
        )));
    }
    let n = i64::try_from(bidegrees.len()).map_err(|_| Error::Overflow("equation count"))?;
    let dim_z1 = add(3, sub(n, k)?)?;
    let (dim_z1, k_u) = match (usize::try_from(dim_z1), usize::try_from(k)) {
        (Ok(d), Ok(k)) => (d, k),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "no ambient for k = {k} and {n} equations"
            )))
        }
    };
    let form = product_chow_over(deg_z1, dim_z1, k_u)?;
    let k_class = form.anticanonical().clone();
    let eqs: Vec<DivisorClass> = bidegrees.iter().map(|&(a, b)| DivisorClass::from([a, b])).collect();
    let mut classes = vec![&k_class; 3];
    classes.extend(eqs.iter());
    let mk3 = form.top_product(&classes)?;
    Ok((mk3, genus_of(mk3)?))
}

/// Genus of the nodal threefold obtained by unprojecting an anticanonical
/// model of genus `g_bar`.
pub fn unprojection_genus(g_bar: i64) -> Result<i64> {
    if g_bar < 1 {
        return Err(Error::InvalidArgument(format!("genus {g_bar} must be positive")));
    }
    add(g_bar, 1)
}

/// Renders bidegrees as `(1,1),(2,1)` with repeats folded to `(1,1)^3`.
pub fn format_bidegrees(bidegrees: &[(i64, i64)]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < bidegrees.len() {
        let p = bidegrees[i];
        let run = bidegrees[i..].iter().take_while(|&&q| q == p).count();
        let cell = format!("({},{})", p.0, p.1);
        parts.push(if run > 1 { format!("{cell}^{run}") } else { cell });
        i += run;
    }
    parts.join(",")
}

/// Parses the output of [`format_bidegrees`].
pub fn parse_bidegrees(s: &str) -> Result<Vec<(i64, i64)>> {
    let bad = |m: &str| Error::InvalidArgument(format!("bidegrees {s:?}: {m}"));
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
        let close = body.find(')').ok_or_else(|| bad("missing ')'"))?;
        let (a, b) = body[..close].split_once(',').ok_or_else(|| bad("expected a,b"))?;
        let a: i64 = a.trim().parse().map_err(|_| bad("bad integer"))?;
        let b: i64 = b.trim().parse().map_err(|_| bad("bad integer"))?;
        rest = &body[close + 1..];
        let mut times = 1usize;
        if let Some(r) = rest.strip_prefix('^') {
            let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
            times = r[..end].parse().map_err(|_| bad("bad exponent"))?;
            rest = &r[end..];
        }
        out.extend(std::iter::repeat_n((a, b), times));
        rest = rest.trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(bad("trailing ','"));
            }
        } else if !rest.is_empty() {
            return Err(bad("expected ','"));
        }
    }
    if out.is_empty() {
        return Err(bad("empty"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_examples() {
        let x = WeightedCI::new(vec![1, 1, 1, 1, 3], vec![6]).unwrap();
        assert_eq!(
            wci_invariants(&x).unwrap(),
            CiInvariants {
                mk3: 2,
                iota: 1,
                genus_or_degree: 2
            }
        );
        let y = WeightedCI::new(vec![1, 1, 1, 2, 3], vec![6]).unwrap();
        assert_eq!(wci_invariants(&y).unwrap().mk3, 8);
        assert!(WeightedCI::new(vec![1, 1], vec![3]).is_err());
        assert!(WeightedCI::new(vec![2, 2, 2, 1], vec![1]).is_err());
    }

    #[test]
    fn cone_section_genus_six() {
        let s = cone_grassmannian_section(&[1, 1, 1, 2]).unwrap();
        assert!(cone_grassmannian_section(&[1, 1, 2]).is_err());
        assert_eq!((s.mk3, s.iota, s.genus_or_degree), (10, 1, 6));
    }

    #[test]
    fn mukai_sections() {
        assert_eq!(mukai_section_genus(9, 3).unwrap(), 9);
        assert_eq!(mukai_section_genus(7, 7).unwrap(), 7);
        assert_eq!(mukai_section_genus(8, 5).unwrap(), 8);
        assert!(mukai_section_genus(8, 4).is_err());
    }

    #[test]
    fn product_examples() {
        assert_eq!(product_ci_invariants(2, 3, 2, &[(1, 1), (1, 1)]).unwrap().1, 11);
        assert_eq!(product_ci_invariants(1, 4, 1, &[(3, 1)]).unwrap().1, 6);
        assert_eq!(product_ci_invariants(1, 3, 2, &[(2, 2)]).unwrap().1, 7);
        assert!(product_ci_invariants(1, 4, 1, &[(2, 1)]).is_err());
    }

    #[test]
    fn exponents() {
        assert_eq!(ci_exponents(4, 3, 2).unwrap(), vec![(1, 1), (2, 1)]);
        assert_eq!(ci_exponents(4, 3, 3).unwrap(), vec![(1, 1); 3]);
        assert_eq!(ci_exponents(3, 2, 2).unwrap(), vec![(2, 2)]);
        assert_eq!(partitions(4, 2), vec![vec![3, 1], vec![2, 2]]);
    }

    #[test]
    fn unprojection() {
        assert_eq!(unprojection_genus(11).unwrap(), 12);
        assert_eq!(unprojection_genus(1).unwrap(), 2);
    }

    #[test]
    fn bidegree_text_round_trip() {
        for v in [vec![(1, 1), (2, 1)], vec![(1, 1); 3], vec![(2, 2)]] {
            assert_eq!(parse_bidegrees(&format_bidegrees(&v)).unwrap(), v);
        }
        assert_eq!(format_bidegrees(&[(1, 1); 2]), "(1,1)^2");
        assert!(parse_bidegrees("(1,1),").is_err());
    }
}
