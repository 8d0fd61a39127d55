//! JSON system files.
//!
//! ```json
//! {
//!   "variables": ["x1", "x2"],
//!   "polynomials": ["x1^2 + x1*x2^2 - 1", [{"e": [2, 1], "c": [1, 0]}, {"e": [1, 0], "c": [1, 0]}]],
//!   "multidegree": [2, 2]
//! }
//! ```
//!
//! Each polynomial is either an expression string or a list of terms with
//! exponent vector `e` and complex coefficient `c = [re, im]`. `variables`
//! may be replaced by `nvars`, which names them `x1..xn`. A univariate file
//! may carry an extra multiplier `g` for the generalized Barnett matrix.

use std::path::Path;

use anyhow::{bail, Context};
use bezroots::bezout1d::UniPoly;
use bezroots::poly::{default_names, parse_poly, Monomial, MultiPoly, PolySystem};
use bezroots::C64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Term {
    pub e: Vec<u32>,
    pub c: [f64; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum PolySpec {
    Expr(String),
    Terms(Vec<Term>),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nvars: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    pub polynomials: Vec<PolySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multidegree: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<PolySpec>,
}

/// Parsed contents of a system file.
#[derive(Clone, Debug)]
pub struct LoadedSystem {
    pub system: PolySystem,
    /// Multiplier for the univariate generalized Barnett matrix.
    pub g: Option<UniPoly>,
}

/// Error raised for malformed input; maps to its own exit code.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(InputError(msg.into()))
}

fn to_poly(spec: &PolySpec, names: &[String]) -> anyhow::Result<MultiPoly> {
    match spec {
        PolySpec::Expr(s) => parse_poly(s, names).map_err(|e| input_err(format!("`{s}`: {e}"))),
        PolySpec::Terms(ts) => {
            let n = names.len();
            let mut terms = Vec::with_capacity(ts.len());
            for t in ts {
                if t.e.len() != n {
                    return Err(input_err(format!(
                        "term exponent {:?} has {} entries, expected {n}",
                        t.e,
                        t.e.len()
                    )));
                }
                terms.push((Monomial(t.e.clone()), C64::new(t.c[0], t.c[1])));
            }
            MultiPoly::from_terms(n, terms).map_err(|e| input_err(e.to_string()))
        }
    }
}

impl SystemFile {
    pub fn names(&self) -> anyhow::Result<Vec<String>> {
        match (&self.variables, self.nvars) {
            (Some(v), Some(n)) if v.len() != n => Err(input_err(format!(
                "nvars = {n} but {} variable names",
                v.len()
            ))),
            (Some(v), _) => {
                if v.iter().any(|s| s == "i") {
                    return Err(input_err("`i` is reserved for the imaginary unit"));
                }
                Ok(v.clone())
            }
            (None, Some(n)) => Ok(default_names(n)),
            (None, None) => Ok(default_names(self.polynomials.len())),
        }
    }

    pub fn load(&self) -> anyhow::Result<LoadedSystem> {
        let names = self.names()?;
        let polys = self
            .polynomials
            .iter()
            .map(|p| to_poly(p, &names))
            .collect::<anyhow::Result<Vec<_>>>()?;
        let mut system =
            PolySystem::with_names(polys, names.clone()).map_err(|e| input_err(e.to_string()))?;
        if let Some(d) = &self.multidegree {
            system = system
                .with_multidegree(d.clone())
                .map_err(|e| input_err(e.to_string()))?;
        }
        let g = match &self.g {
            None => None,
            Some(spec) => {
                if names.len() != 1 {
                    return Err(input_err("`g` is only supported for univariate systems"));
                }
                let p = to_poly(spec, &names)?;
                let deg = p.degree_in(0) as usize;
                let mut c = vec![C64::new(0.0, 0.0); deg + 1];
                for (m, v) in p.terms() {
                    c[m.exps()[0] as usize] = *v;
                }
                Some(UniPoly::from_ascending(c))
            }
        };
        Ok(LoadedSystem { system, g })
    }
}

pub fn parse_system(text: &str) -> anyhow::Result<LoadedSystem> {
    let file: SystemFile =
        serde_json::from_str(text).map_err(|e| input_err(format!("malformed system file: {e}")))?;
    file.load()
}

pub fn load_system(path: &Path) -> anyhow::Result<LoadedSystem> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_system(&text).with_context(|| format!("loading {}", path.display()))
}

/// Name used for the `y` counterpart of a variable.
pub fn y_name(x: &str) -> String {
    match x.strip_prefix('x') {
        Some(rest) => format!("y{rest}"),
        None => format!("{x}_y"),
    }
}

pub fn ensure_univariate(sys: &PolySystem) -> anyhow::Result<()> {
    if sys.nvars() != 1 {
        bail!("expected a univariate system");
    }
    Ok(())
}
