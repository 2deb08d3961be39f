//! Run configuration: a plain `key = value` file, overridden by flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Result, VerifyError};

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "VERIFY_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Identities,
    Spectra,
    ConeOracle,
    Linearization,
    Indicial,
    Norms,
}

impl Suite {
    /// Execution order.
    pub const ALL: [Suite; 6] =
        [Suite::Identities, Suite::Spectra, Suite::ConeOracle, Suite::Linearization, Suite::Indicial, Suite::Norms];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Spectra => "spectra",
            Suite::ConeOracle => "cone-oracle",
            Suite::Linearization => "linearization",
            Suite::Indicial => "indicial",
            Suite::Norms => "norms",
        }
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| VerifyError::Config(format!("unknown suite '{s}'")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bundle/constraint pair for a single spectrum run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumTarget {
    Function,
    OneForm,
    DivergenceFreeOneForm,
    Sym,
    Tt,
}

impl SpectrumTarget {
    pub fn from_parts(bundle: &str, constraint: &str) -> Result<Self> {
        match (bundle, constraint) {
            ("function", "none") => Ok(Self::Function),
            ("one-form", "none") => Ok(Self::OneForm),
            ("one-form", "divergence-free") => Ok(Self::DivergenceFreeOneForm),
            ("sym", "none") => Ok(Self::Sym),
            ("sym" | "tt", "tt") => Ok(Self::Tt),
            _ => Err(VerifyError::Config(format!("no spectrum for bundle '{bundle}' with constraint '{constraint}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub suites: Vec<Suite>,
    pub identity_degree: usize,
    pub spectrum_degree: usize,
    /// Restricts the spectra suite to one bundle/constraint pair.
    pub spectrum_target: Option<SpectrumTarget>,
    pub oracle_grids: Vec<usize>,
    pub oracle_order: usize,
    pub oracle_inner: f64,
    pub oracle_outer: f64,
    pub jet_order: usize,
    pub jet_spacing: f64,
    pub eps: Vec<f64>,
    pub sample_points: usize,
    pub max_j: usize,
    pub tt_degree: usize,
    pub t_values: Vec<f64>,
    pub norm_a: f64,
    pub norm_l: f64,
    pub beta_prime: f64,
    pub norm_exponents: Vec<f64>,
    pub tol_identity: f64,
    pub tol_spectrum: f64,
    pub tol_slope: f64,
    pub tol_composition: f64,
    pub tol_flat: f64,
    pub tol_lie: f64,
    pub tol_root: f64,
    pub tol_scaling: f64,
    pub min_remainder_slope: f64,
    #[serde(skip)]
    pub json: Option<PathBuf>,
    #[serde(skip)]
    pub csv_dir: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            suites: Suite::ALL.to_vec(),
            identity_degree: 4,
            spectrum_degree: 4,
            spectrum_target: None,
            oracle_grids: vec![16, 32, 64],
            oracle_order: 2,
            oracle_inner: 1.0,
            oracle_outer: 2.0,
            jet_order: 4,
            jet_spacing: 0.02,
            eps: vec![1e-1, 3e-2, 1e-2],
            sample_points: 4,
            max_j: 8,
            tt_degree: 4,
            t_values: vec![-1e-2, -1e-3, 1e-3, 1e-2],
            norm_a: 0.7,
            norm_l: 4.0,
            beta_prime: 1.0,
            norm_exponents: vec![2.0, -4.0],
            tol_identity: 1e-8,
            tol_spectrum: 1e-6,
            tol_slope: 0.2,
            tol_composition: 1e-9,
            tol_flat: 1e-12,
            tol_lie: 1e-10,
            tol_root: 1e-9,
            tol_scaling: 1e-10,
            min_remainder_slope: 1.9,
            json: None,
            csv_dir: None,
            seed: 0,
        }
    }
}

fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| VerifyError::Config(format!("{key}: cannot parse '{s}'"))))
        .collect()
}

fn one<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| VerifyError::Config(format!("{key}: cannot parse '{v}'")))
}

impl RunConfig {
    /// Sets one key; unknown keys are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let k = key.trim();
        match k {
            "suites" => {
                self.suites = if value.trim() == "all" { Suite::ALL.to_vec() } else { list(k, value)? };
            }
            "identity_degree" => self.identity_degree = one(k, value)?,
            "spectrum_degree" => self.spectrum_degree = one(k, value)?,
            "spectrum_target" => {
                self.spectrum_target = match value.trim() {
                    "" | "standard" => None,
                    v => {
                        let (b, c) = v.split_once('/').unwrap_or((v, "none"));
                        Some(SpectrumTarget::from_parts(b, c)?)
                    }
                }
            }
            "oracle_grids" => self.oracle_grids = list(k, value)?,
            "oracle_order" => self.oracle_order = one(k, value)?,
            "oracle_inner" => self.oracle_inner = one(k, value)?,
            "oracle_outer" => self.oracle_outer = one(k, value)?,
            "jet_order" => self.jet_order = one(k, value)?,
            "jet_spacing" => self.jet_spacing = one(k, value)?,
            "eps" => self.eps = list(k, value)?,
            "sample_points" => self.sample_points = one(k, value)?,
            "max_j" => self.max_j = one(k, value)?,
            "tt_degree" => self.tt_degree = one(k, value)?,
            "t_values" => self.t_values = list(k, value)?,
            "norm_a" => self.norm_a = one(k, value)?,
            "norm_l" => self.norm_l = one(k, value)?,
            "beta_prime" => self.beta_prime = one(k, value)?,
            "norm_exponents" => self.norm_exponents = list(k, value)?,
            "tol_identity" => self.tol_identity = one(k, value)?,
            "tol_spectrum" => self.tol_spectrum = one(k, value)?,
            "tol_slope" => self.tol_slope = one(k, value)?,
            "tol_composition" => self.tol_composition = one(k, value)?,
            "tol_flat" => self.tol_flat = one(k, value)?,
            "tol_lie" => self.tol_lie = one(k, value)?,
            "tol_root" => self.tol_root = one(k, value)?,
            "tol_scaling" => self.tol_scaling = one(k, value)?,
            "min_remainder_slope" => self.min_remainder_slope = one(k, value)?,
            "json" => self.json = Some(PathBuf::from(value.trim())),
            "csv_dir" => self.csv_dir = Some(PathBuf::from(value.trim())),
            "seed" => self.seed = one(k, value)?,
            _ => return Err(VerifyError::Config(format!("unknown key '{k}'"))),
        }
        Ok(())
    }

    /// `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| VerifyError::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(k, v).map_err(|e| VerifyError::Config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| VerifyError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut c = Self::default();
        c.apply_text(&text)?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(VerifyError::Config(m));
        if self.suites.is_empty() {
            return bad("no suites selected".into());
        }
        for (name, v) in [
            ("identity_degree", self.identity_degree),
            ("spectrum_degree", self.spectrum_degree),
            ("oracle_order", self.oracle_order),
            ("jet_order", self.jet_order),
            ("sample_points", self.sample_points),
            ("tt_degree", self.tt_degree),
        ] {
            if v == 0 {
                return bad(format!("{name} must be positive"));
            }
        }
        if !matches!(self.oracle_order, 2 | 4) {
            return bad(format!("oracle_order must be 2 or 4, got {}", self.oracle_order));
        }
        if !matches!(self.jet_order, 2 | 4 | 6) {
            return bad(format!("jet_order must be 2, 4 or 6, got {}", self.jet_order));
        }
        if self.oracle_grids.len() < 3 || self.oracle_grids.iter().any(|n| *n < 4) {
            return bad("oracle_grids needs at least three sizes >= 4".into());
        }
        if !(self.oracle_inner > 0.0 && self.oracle_outer > self.oracle_inner) {
            return bad("need 0 < oracle_inner < oracle_outer".into());
        }
        if !(self.jet_spacing > 0.0 && self.jet_spacing < 0.1) {
            return bad("jet_spacing must lie in (0, 0.1)".into());
        }
        if self.eps.len() < 3 || self.eps.iter().any(|e| !(*e > 0.0 && *e <= 0.1)) {
            return bad("eps needs at least three values in (0, 0.1]".into());
        }
        if self.t_values.iter().any(|t| !(t.abs() <= 0.1) || *t == 0.0) {
            return bad("t_values must be nonzero with |t| <= 0.1".into());
        }
        if !(self.norm_a > 0.0 && self.norm_l > 1.0 && self.beta_prime > 0.0) {
            return bad("need norm_a > 0, norm_l > 1 and beta_prime > 0".into());
        }
        if self.norm_exponents.iter().any(|b| !b.is_finite()) {
            return bad("norm_exponents must be finite".into());
        }
        for (name, v) in [
            ("tol_identity", self.tol_identity),
            ("tol_spectrum", self.tol_spectrum),
            ("tol_slope", self.tol_slope),
            ("tol_composition", self.tol_composition),
            ("tol_flat", self.tol_flat),
            ("tol_lie", self.tol_lie),
            ("tol_root", self.tol_root),
            ("tol_scaling", self.tol_scaling),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return bad(format!("{name} = {v} is not in (0, 1)"));
            }
        }
        if !(self.min_remainder_slope > 0.0) {
            return bad("min_remainder_slope must be positive".into());
        }
        Ok(())
    }

    /// Suites in execution order, duplicates removed.
    pub fn ordered_suites(&self) -> Vec<Suite> {
        let mut s = self.suites.clone();
        s.sort();
        s.dedup();
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defaults_are_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn file_syntax() {
        let mut c = RunConfig::default();
        c.apply_text("# comment\nsuites = indicial, norms\nmax_j = 3   # inline\n\nt_values = 0.01,-0.01\n").unwrap();
        assert_eq!(c.suites, vec![Suite::Indicial, Suite::Norms]);
        assert_eq!(c.max_j, 3);
        assert_eq!(c.t_values, vec![0.01, -0.01]);
        assert!(c.apply_text("max_j 3").is_err());
        assert!(c.apply_text("colour = red").is_err());
        assert!(c.apply_text("max_j = -1").is_err());
    }

    #[test]
    fn invalid_values_rejected() {
        for (k, v) in [
            ("tol_identity", "1.5"),
            ("oracle_grids", "16,32"),
            ("identity_degree", "0"),
            ("t_values", "0.5"),
            ("norm_l", "1"),
            ("suites", ""),
            ("oracle_order", "3"),
        ] {
            let mut c = RunConfig::default();
            c.set(k, v).unwrap();
            assert!(c.validate().is_err(), "{k} = {v}");
        }
    }

    #[test]
    fn suites_run_in_fixed_order() {
        let mut c = RunConfig::default();
        c.set("suites", "norms,identities,indicial,identities").unwrap();
        assert_eq!(c.ordered_suites(), vec![Suite::Identities, Suite::Indicial, Suite::Norms]);
    }

    #[test]
    fn spectrum_targets() {
        let mut c = RunConfig::default();
        c.set("spectrum_target", "tt/tt").unwrap();
        assert_eq!(c.spectrum_target, Some(SpectrumTarget::Tt));
        c.set("spectrum_target", "one-form/divergence-free").unwrap();
        assert_eq!(c.spectrum_target, Some(SpectrumTarget::DivergenceFreeOneForm));
        assert!(c.set("spectrum_target", "function/tt").is_err());
    }

    proptest! {
        #[test]
        fn tolerance_range(v in -2.0f64..2.0) {
            let mut c = RunConfig::default();
            c.tol_root = v;
            prop_assert_eq!(c.validate().is_ok(), v > 0.0 && v < 1.0);
        }
    }
}
