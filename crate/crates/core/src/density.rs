//! Value distributions with exact coefficients over a fixed transcendental basis.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::ExactRational;

pub const SIX_OVER_PI2: f64 = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);

/// The constant every coefficient of a table is multiplied by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Basis {
    #[serde(rename = "ONE")]
    One,
    #[serde(rename = "SIX_OVER_PI2")]
    SixOverPi2,
    #[serde(rename = "ARTIN")]
    Artin,
}

impl Basis {
    pub fn label(self) -> &'static str {
        match self {
            Basis::One => "ONE",
            Basis::SixOverPi2 => "SIX_OVER_PI2",
            Basis::Artin => "ARTIN",
        }
    }

    pub fn numeric(self) -> f64 {
        match self {
            Basis::One => 1.0,
            Basis::SixOverPi2 => SIX_OVER_PI2,
            Basis::Artin => crate::densities_prime::artin_value(),
        }
    }

    /// Renders `c * basis` compactly, e.g. `9A/19` or `1/12`.
    pub fn render(self, c: &ExactRational) -> String {
        let sym = match self {
            Basis::One => return c.to_string(),
            Basis::SixOverPi2 => "(6/pi^2)",
            Basis::Artin => "A",
        };
        if c.is_zero() {
            return "0".into();
        }
        let sign = if c.is_negative() { "-" } else { "" };
        let a = c.abs();
        let num = a.numer().to_string();
        let den = a.denom().to_string();
        let head = if num == "1" { sym.to_string() } else { format!("{num}{sym}") };
        if den == "1" {
            format!("{sign}{head}")
        } else {
            format!("{sign}{head}/{den}")
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Densities of the nonzero values; the value 0 receives the complementary mass.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityTable {
    pub basis: Basis,
    /// Set when the coefficients rest on an unproven equidistribution hypothesis.
    pub conditional: bool,
    entries: BTreeMap<i64, ExactRational>,
}

impl DensityTable {
    pub fn new(basis: Basis) -> Self {
        DensityTable { basis, conditional: false, entries: BTreeMap::new() }
    }

    pub fn conditional(mut self) -> Self {
        self.conditional = true;
        self
    }

    /// Adds `coeff` to the mass of `value`; the value 0 is implicit and ignored.
    pub fn add(&mut self, value: i64, coeff: &ExactRational) {
        if value == 0 || coeff.is_zero() {
            return;
        }
        let e = self.entries.entry(value).or_insert_with(ExactRational::zero);
        *e += coeff;
        if e.is_zero() {
            self.entries.remove(&value);
        }
    }

    pub fn get(&self, value: i64) -> ExactRational {
        self.entries.get(&value).cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn entries(&self) -> &BTreeMap<i64, ExactRational> {
        &self.entries
    }

    pub fn values(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    /// Sum of the nonzero-value coefficients.
    pub fn mass(&self) -> ExactRational {
        self.entries.values().cloned().sum()
    }

    /// `sum v * coeff(v)`, the mean as a basis multiple.
    pub fn mean(&self) -> ExactRational {
        self.moment(1)
    }

    pub fn moment(&self, order: u32) -> ExactRational {
        self.entries
            .iter()
            .map(|(&v, c)| ExactRational::from_int(v).pow(order as i32).unwrap() * c.clone())
            .sum()
    }

    pub fn abs_moment(&self, order: u32) -> ExactRational {
        self.entries
            .iter()
            .map(|(&v, c)| ExactRational::from_int(v.abs()).pow(order as i32).unwrap() * c.clone())
            .sum()
    }

    pub fn numeric(&self, value: i64) -> f64 {
        if value == 0 {
            return self.zero_numeric();
        }
        self.get(value).to_f64() * self.basis.numeric()
    }

    pub fn zero_numeric(&self) -> f64 {
        1.0 - self.mass().to_f64() * self.basis.numeric()
    }

    /// Folds `v` and `-v` together.
    pub fn fold_abs(&self) -> DensityTable {
        let mut out = DensityTable { basis: self.basis, conditional: self.conditional, entries: BTreeMap::new() };
        for (&v, c) in &self.entries {
            out.add(v.abs(), c);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let records: Vec<Value> = self
            .entries
            .iter()
            .map(|(&v, c)| {
                json!({
                    "value": v,
                    "coeff": c.to_string(),
                    "basis": self.basis.label(),
                    "numeric": c.to_f64() * self.basis.numeric(),
                })
            })
            .collect();
        json!({
            "conditional": self.conditional,
            "entries": records,
            "zero": {
                "complement_of": self.mass().to_string(),
                "basis": self.basis.label(),
                "numeric": self.zero_numeric(),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn render_artin_multiples() {
        assert_eq!(Basis::Artin.render(&q(9, 19)), "9A/19");
        assert_eq!(Basis::Artin.render(&q(4, 1)), "4A");
        assert_eq!(Basis::Artin.render(&q(1, 15)), "A/15");
        assert_eq!(Basis::Artin.render(&q(-1, 2)), "-A/2");
        assert_eq!(Basis::One.render(&q(7, 12)), "7/12");
    }

    #[test]
    fn add_merges_and_drops_zero() {
        let mut t = DensityTable::new(Basis::One);
        t.add(1, &q(1, 3));
        t.add(1, &q(1, 6));
        t.add(0, &q(1, 2));
        t.add(-1, &q(1, 4));
        t.add(-1, &q(-1, 4));
        assert_eq!(t.get(1), q(1, 2));
        assert_eq!(t.entries().len(), 1);
        assert!((t.zero_numeric() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn json_records() {
        let mut t = DensityTable::new(Basis::SixOverPi2);
        t.add(-2, &q(1, 12));
        let j = t.to_json();
        assert_eq!(j["entries"][0]["coeff"], "1/12");
        assert_eq!(j["entries"][0]["basis"], "SIX_OVER_PI2");
        assert_eq!(j["conditional"], false);
    }
}
