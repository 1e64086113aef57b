use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::catalog::{Kind, PropertyDef, PropertyId, VarDomain};
use super::expr::Constraint;
use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;

/// Whether a scan is expected to find confirmed violations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Holds,
    Violations,
}

/// A requested scan: one property, optional domain overrides and extra
/// constraints, sampling sizes and a seed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanSpec {
    pub property: String,
    /// Per-variable domain overrides.
    #[serde(default)]
    pub domains: BTreeMap<String, VarDomain>,
    /// Extra constraints. One over exactly the same variables as a built-in
    /// constraint replaces it.
    #[serde(default)]
    pub constraints: Vec<String>,
    /// Grid values per variable (ranges only; integer and choice domains
    /// contribute every value).
    pub grid_points: usize,
    /// Accepted random points.
    pub random_points: usize,
    pub seed: u64,
    /// Overrides the property's tolerance.
    pub slack_tol: Option<f64>,
    pub precision: PrecisionPolicy,
    /// Overrides the expectation implied by the property kind.
    pub expect_violations: Option<bool>,
    pub label: Option<String>,
}

impl ScanSpec {
    pub fn new(property: impl Into<String>) -> Self {
        ScanSpec {
            property: property.into(),
            domains: BTreeMap::new(),
            constraints: Vec::new(),
            grid_points: 4,
            random_points: 10_000,
            seed: 0,
            slack_tol: None,
            precision: PrecisionPolicy::default(),
            expect_violations: None,
            label: None,
        }
    }

    pub fn points(mut self, grid: usize, random: usize) -> Self {
        self.grid_points = grid;
        self.random_points = random;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn constraint(mut self, c: impl Into<String>) -> Self {
        self.constraints.push(c.into());
        self
    }

    pub fn domain(mut self, var: impl Into<String>, d: VarDomain) -> Self {
        self.domains.insert(var.into(), d);
        self
    }

    pub fn expect_violations(mut self, v: bool) -> Self {
        self.expect_violations = Some(v);
        self
    }

    pub fn label(mut self, l: impl Into<String>) -> Self {
        self.label = Some(l.into());
        self
    }

    pub fn precision(mut self, p: PrecisionPolicy) -> Self {
        self.precision = p;
        self
    }

    pub(crate) fn resolve(&self) -> Result<Resolved> {
        self.precision.validate()?;
        let id = PropertyId::from_name(&self.property)?;
        let def = id.def(&self.precision);
        let names = def.var_names();
        for k in self.domains.keys() {
            if !names.contains(&k.as_str()) {
                return Err(Error::InvalidSpec(format!(
                    "`{}` has no variable `{k}` (variables: {})",
                    def.name,
                    names.join(", ")
                )));
            }
        }
        let domains: Vec<VarDomain> = def
            .vars
            .iter()
            .map(|(n, d)| self.domains.get(*n).cloned().unwrap_or_else(|| d.clone()))
            .collect();
        for (n, d) in names.iter().zip(&domains) {
            d.validate(n)?;
        }

        let user = self
            .constraints
            .iter()
            .map(|c| Constraint::parse(c, &names))
            .collect::<Result<Vec<_>>>()?;
        let mut constraints = Vec::new();
        for b in &def.constraints {
            let c = Constraint::parse(b, &names)?;
            if !user.iter().any(|u| u.vars() == c.vars()) {
                constraints.push(c);
            }
        }
        constraints.extend(user);

        let tol = self.slack_tol.unwrap_or(def.tol);
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "tolerance {tol} must be finite and >= 0"
            )));
        }
        if self.grid_points == 0 && self.random_points == 0 {
            return Err(Error::InvalidSpec(
                "no grid and no random points requested".into(),
            ));
        }
        let expectation = match self.expect_violations {
            Some(true) => Expectation::Violations,
            Some(false) => Expectation::Holds,
            None if def.kind == Kind::NegativeControl => Expectation::Violations,
            None => Expectation::Holds,
        };
        Ok(Resolved {
            def,
            domains,
            constraints,
            tol,
            expectation,
        })
    }
}

pub(crate) struct Resolved {
    pub def: PropertyDef,
    pub domains: Vec<VarDomain>,
    pub constraints: Vec<Constraint>,
    pub tol: f64,
    pub expectation: Expectation,
}

impl Resolved {
    pub fn admits(&self, point: &[f64]) -> bool {
        self.constraints.iter().all(|c| c.holds(point))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn user_clause_replaces_builtin_over_same_variables() {
        let r = ScanSpec::new("check_abq_direct")
            .constraint("a>b")
            .resolve()
            .unwrap();
        let texts: Vec<&str> = r.constraints.iter().map(|c| c.text()).collect();
        assert_eq!(texts, ["x>=y", "y>=r", "a>b"]);
        let r = ScanSpec::new("check_abq_direct")
            .constraint("x<3")
            .resolve()
            .unwrap();
        assert_eq!(r.constraints.len(), 4);
    }

    #[test]
    fn rejects_unknown_variables_and_properties() {
        assert!(matches!(
            ScanSpec::new("nope").resolve(),
            Err(Error::UnknownProperty(_))
        ));
        let s = ScanSpec::new("check_aq_numbers").domain("zz", VarDomain::Range { lo: 0.0, hi: 1.0 });
        assert!(matches!(s.resolve(), Err(Error::InvalidSpec(_))));
        let s = ScanSpec::new("check_aq_numbers").constraint("zz < 1");
        assert!(matches!(s.resolve(), Err(Error::InvalidSpec(_))));
        let s = ScanSpec::new("check_aq_numbers").domain("q", VarDomain::Range { lo: 0.5, hi: 0.1 });
        assert!(matches!(s.resolve(), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn negative_controls_default_to_expecting_violations() {
        let r = ScanSpec::new("bq_binomial_symmetry").resolve().unwrap();
        assert_eq!(r.expectation, Expectation::Violations);
        let r = ScanSpec::new("check_aq_numbers")
            .expect_violations(true)
            .resolve()
            .unwrap();
        assert_eq!(r.expectation, Expectation::Violations);
    }
}
