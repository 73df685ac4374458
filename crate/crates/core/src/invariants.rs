//! Numerical invariants of Fano threefolds and the bridges between them.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{add, div_exact, mul, pow, sub, Error, Result};

/// A deformation family of Fano threefolds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FanoFamily {
    pub rho: i64,
    pub iota: i64,
    pub mk3: i64,
    pub h12: i64,
    pub label: String,
}

impl FanoFamily {
    pub fn new(rho: i64, iota: i64, mk3: i64, h12: i64, label: impl Into<String>) -> Result<Self> {
        let f = Self {
            rho,
            iota,
            mk3,
            h12,
            label: label.into(),
        };
        f.validate()?;
        Ok(f)
    }

    /// Checks the family invariants; the messages name the violated rule.
    pub fn validate(&self) -> Result<()> {
        if self.rho < 1 {
            return Err(Error::InvalidArgument(format!(
                "Picard rank {} must be positive",
                self.rho
            )));
        }
        if !(1..=4).contains(&self.iota) {
            return Err(Error::InvalidArgument(format!(
                "Fano index {} out of range: a Fano threefold has index at most 4",
                self.iota
            )));
        }
        if self.mk3 < 2 || self.mk3 % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "(-K)^3 = {} must be even and at least 2",
                self.mk3
            )));
        }
        degree_of(self.mk3, self.iota)?;
        if self.h12 < 0 {
            return Err(Error::InvalidArgument(format!(
                "h12 = {} must be nonnegative",
                self.h12
            )));
        }
        Ok(())
    }

    pub fn genus(&self) -> i64 {
        self.mk3 / 2 + 1
    }

    pub fn degree(&self) -> i64 {
        self.mk3 / (self.iota * self.iota * self.iota)
    }
}

/// `g = (−K)³/2 + 1`.
pub fn genus_of(mk3: i64) -> Result<i64> {
    if mk3 <= 0 || mk3 % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "(-K)^3 must be even and positive, got {mk3}"
        )));
    }
    add(mk3 / 2, 1)
}

/// `(−K)³ = 2g − 2`.
pub fn mk3_of_genus(g: i64) -> Result<i64> {
    sub(mul(2, g)?, 2)
}

/// `d = (−K)³ / ι³`.
pub fn degree_of(mk3: i64, iota: i64) -> Result<i64> {
    if iota < 1 {
        return Err(Error::InvalidArgument(format!("index must be positive, got {iota}")));
    }
    div_exact(mk3, pow(iota, 3)?, "(-K)^3")
}

/// `h⁰(−K) = g + 2`.
pub fn h0_anticanonical(g: i64) -> Result<i64> {
    if g < 2 {
        return Err(Error::InvalidArgument(format!("genus must be at least 2, got {g}")));
    }
    add(g, 2)
}

/// `h⁰(H)` for the fundamental divisor `H = −K/ι`, by Riemann-Roch:
/// `χ(H) = H³(1/6 + ι/4 + ι²/12) + 2/ι + 1`.
pub fn h0_fundamental(iota: i64, mk3: i64) -> Result<i64> {
    let h3 = degree_of(mk3, iota)?;
    let r = |n: i64, d: i64| Ratio::new(n, d);
    let iota_sq = pow(iota, 2)?;
    let chi = Ratio::from_integer(h3) * (r(1, 6) + r(iota, 4) + r(iota_sq, 12)) + r(2, iota) + r(1, 1);
    if !chi.is_integer() {
        return Err(Error::NotDivisible {
            what: format!("chi(H) = {chi}"),
            by: 1,
        });
    }
    Ok(chi.to_integer())
}

/// `χ_top = 2 + 2ρ − 2h^{1,2}`.
pub fn euler_characteristic(rho: i64, h12: i64) -> Result<i64> {
    sub(add(2, mul(2, rho)?)?, mul(2, h12)?)
}

/// Genus of the blowup of the node: `g − 1`.
pub fn blowup_genus(g: i64) -> Result<i64> {
    if g < 2 {
        return Err(Error::InvalidArgument(format!("genus must be at least 2, got {g}")));
    }
    sub(g, 1)
}

/// Hodge number of the blowup of the node in terms of the smoothing.
pub fn blowup_hodge(h_sm: i64, factorial: bool) -> Result<i64> {
    if factorial {
        if h_sm < 1 {
            return Err(Error::InvalidArgument(format!(
                "a factorial nodal threefold needs h12 of the smoothing at least 1, got {h_sm}"
            )));
        }
        sub(h_sm, 1)
    } else {
        Ok(h_sm)
    }
}

/// Number of singular points of the anticanonical model on the nonfactorial
/// side: `1 + h′ − h_sm`.
pub fn node_count_nonfactorial(h_sm: i64, h_prime: i64) -> Result<i64> {
    if h_prime < h_sm - 1 {
        return Err(Error::InvalidArgument(format!(
            "h' = {h_prime} must be at least h_sm - 1 = {}",
            h_sm - 1
        )));
    }
    add(1, sub(h_prime, h_sm)?)
}

/// Number of singular points of the anticanonical model on the factorial
/// side: `2 + h̄_sm − h_sm`.
pub fn node_count_factorial(h_sm: i64, h_bar_sm: i64) -> Result<i64> {
    add(2, sub(h_bar_sm, h_sm)?)
}

/// A singular-point count as it appears in a table cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum SingCount {
    Finite(i64),
    Infinite,
    NotApplicable,
}

impl SingCount {
    pub fn finite(self) -> Option<i64> {
        match self {
            SingCount::Finite(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for SingCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingCount::Finite(n) => write!(f, "{n}"),
            SingCount::Infinite => f.write_str("∞"),
            SingCount::NotApplicable => f.write_str("—"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_examples() {
        assert_eq!(genus_of(2).unwrap(), 2);
        assert_eq!(genus_of(22).unwrap(), 12);
        assert!(genus_of(0).is_err());
        assert!(genus_of(3).is_err());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree_of(40, 2).unwrap(), 5);
        assert_eq!(degree_of(54, 3).unwrap(), 2);
        assert_eq!(degree_of(64, 4).unwrap(), 1);
        assert!(matches!(degree_of(20, 2), Err(Error::NotDivisible { .. })));
    }

    #[test]
    fn anticanonical_sections() {
        assert_eq!(h0_anticanonical(12).unwrap(), 14);
        assert_eq!(h0_anticanonical(2).unwrap(), 4);
        assert_eq!(h0_anticanonical(7).unwrap(), 9);
    }

    #[test]
    fn fundamental_sections() {
        assert_eq!(h0_fundamental(4, 64).unwrap(), 4);
        assert_eq!(h0_fundamental(3, 54).unwrap(), 5);
        for d in 1..=5 {
            assert_eq!(h0_fundamental(2, 8 * d).unwrap(), d + 2);
        }
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_characteristic(1, 0).unwrap(), 4);
        assert_eq!(euler_characteristic(2, 5).unwrap(), -4);
        assert_eq!(euler_characteristic(1, 52).unwrap(), -100);
    }

    #[test]
    fn blowup_examples() {
        assert_eq!(blowup_genus(12).unwrap(), 11);
        assert_eq!(blowup_genus(2).unwrap(), 1);
        assert_eq!(blowup_genus(7).unwrap(), 6);
        assert_eq!(blowup_hodge(0, false).unwrap(), 0);
        assert_eq!(blowup_hodge(7, true).unwrap(), 6);
        assert_eq!(blowup_hodge(1, true).unwrap(), 0);
        assert!(blowup_hodge(0, true).is_err());
    }

    #[test]
    fn node_count_examples() {
        assert_eq!(node_count_nonfactorial(0, 3).unwrap(), 4);
        assert_eq!(node_count_nonfactorial(5, 9).unwrap(), 5);
        assert_eq!(node_count_nonfactorial(6, 6).unwrap(), 1);
        assert_eq!(node_count_factorial(2, 3).unwrap(), 3);
        assert_eq!(node_count_factorial(21, 20).unwrap(), 1);
        assert_eq!(node_count_factorial(30, 52).unwrap(), 24);
    }

    #[test]
    fn family_validation() {
        assert!(FanoFamily::new(1, 5, 8, 0, "x").is_err());
        assert!(FanoFamily::new(1, 2, 20, 0, "x").is_err());
        assert!(FanoFamily::new(1, 1, 3, 0, "x").is_err());
        let v5 = FanoFamily::new(1, 2, 40, 0, "1-15").unwrap();
        assert_eq!((v5.genus(), v5.degree()), (21, 5));
    }
}
