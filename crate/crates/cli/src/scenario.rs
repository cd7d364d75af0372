//! Scenario files: versioned JSON naming a ring, an ideal, named elements, a
//! degree window, a truncation budget and one or more command steps.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::CliError;

pub const SCHEMA: &str = "codepth-scenario/1";

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub ring: RingDecl,
    /// Generators of `I`. May be left empty when a parameterization is given.
    #[serde(default)]
    pub ideal: Vec<String>,
    #[serde(default)]
    pub parameterization: Option<ParamDecl>,
    /// Named polynomials usable wherever a polynomial is expected.
    #[serde(default)]
    pub elements: BTreeMap<String, String>,
    #[serde(default)]
    pub window: Option<WindowDecl>,
    #[serde(default)]
    pub budget: BudgetDecl,
    pub steps: Vec<Step>,
    /// Exit with code 3 when any step ends Inconclusive.
    #[serde(default)]
    pub require_conclusive: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDecl {
    pub vars: Vec<String>,
    /// `q` or `fp:<p>`.
    #[serde(default = "default_field")]
    pub field: String,
}

fn default_field() -> String {
    "q".into()
}

/// `I` as the kernel of `vars[i] -> images[i]`, found by elimination up to
/// `degree` and checked by substitution.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamDecl {
    pub params: Vec<String>,
    pub images: Vec<String>,
    pub degree: i64,
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub enum WindowDecl {
    /// Fine degrees with every exponent in `[lo, hi]`.
    Box([i64; 2]),
    /// Total degrees in `[lo, hi]`, torus weights within `span` of center.
    Total {
        degrees: [i64; 2],
        #[serde(default = "default_span")]
        span: i64,
    },
}

fn default_span() -> i64 {
    3
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetDecl {
    #[serde(default = "default_min_level")]
    pub min_level: u32,
    #[serde(default = "default_max_level")]
    pub max_level: u32,
    #[serde(default = "default_cap")]
    pub cap: u32,
}

impl Default for BudgetDecl {
    fn default() -> Self {
        BudgetDecl {
            min_level: default_min_level(),
            max_level: default_max_level(),
            cap: default_cap(),
        }
    }
}

fn default_min_level() -> u32 {
    1
}

fn default_max_level() -> u32 {
    6
}

fn default_cap() -> u32 {
    8
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Lc,
    Koszul,
    Coreg,
    Codepth,
    Hellus,
    ThreeSurface,
    Quasicyclic,
    MayerVietoris,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Lc => "lc",
            Command::Koszul => "koszul",
            Command::Coreg => "coreg",
            Command::Codepth => "codepth",
            Command::Hellus => "hellus",
            Command::ThreeSurface => "three-surface",
            Command::Quasicyclic => "quasicyclic",
            Command::MayerVietoris => "mayer-vietoris",
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    /// Prefix for this step's outcome keys; defaults to the command name.
    #[serde(default)]
    pub id: Option<String>,
    pub command: Command,
    #[serde(default)]
    pub args: Args,
    /// Outcome key (without the step prefix) to expected value.
    #[serde(default)]
    pub expect: BTreeMap<String, String>,
}

impl Step {
    pub fn id(&self) -> String {
        self.id.clone().unwrap_or_else(|| self.command.as_str().to_string())
    }
}

/// Command arguments; which fields apply depends on the command.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Args {
    pub module: Option<ModuleDecl>,
    pub seq: Option<Vec<String>>,
    pub indices: Option<Vec<usize>>,
    /// `definition`, `koszul` or `both` for coreg.
    pub method: Option<String>,
    pub pool: Option<Vec<String>>,
    /// Monomials of the ideal up to this degree join the pool.
    pub pool_degree: Option<i64>,
    pub max_len: Option<usize>,
    /// Sequence to extend by one pool element.
    pub prefix: Option<Vec<String>>,
    pub fgh: Option<Vec<String>>,
    pub delta: Option<bool>,
    /// `cover`, `search` or `socle` for quasicyclic.
    pub mode: Option<String>,
    pub m: Option<String>,
    pub n: Option<String>,
    pub x: Option<String>,
    pub y: Option<String>,
    pub alpha: Option<[i64; 2]>,
    pub deg_cap: Option<i64>,
    pub first: Option<Vec<String>>,
    pub second: Option<Vec<String>>,
    pub index: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "kebab-case")]
pub enum ModuleDecl {
    /// `H^index_J(A)`; `J` defaults to the scenario ideal.
    LocalCohomology {
        index: usize,
        #[serde(default)]
        ideal: Option<Vec<String>>,
    },
    /// Inverse system on `neg` with `free` acting freely (default: the rest).
    Inverse {
        neg: Vec<String>,
        #[serde(default)]
        free: Option<Vec<String>>,
    },
    Sum {
        parts: Vec<ModuleDecl>,
    },
    Quotient {
        of: Box<ModuleDecl>,
        by: Vec<String>,
    },
    Annihilator {
        of: Box<ModuleDecl>,
        by: Vec<String>,
    },
    Free,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, CliError> {
        let sc: Scenario = serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn load(path: &Path) -> Result<Scenario, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Scenario::parse(&text)
    }

    fn validate(&self) -> Result<(), CliError> {
        let fail = |m: String| Err(CliError::Validation(m));
        if self.schema != SCHEMA {
            return fail(format!("schema `{}` is not `{SCHEMA}`", self.schema));
        }
        if self.ring.vars.is_empty() {
            return fail("ring.vars is empty".into());
        }
        if self.ideal.is_empty() && self.parameterization.is_none() {
            return fail("ideal is empty and no parameterization is given".into());
        }
        if self.steps.is_empty() {
            return fail("no steps".into());
        }
        if self.budget.max_level < self.budget.min_level {
            return fail("budget.max_level is below budget.min_level".into());
        }
        let mut ids = std::collections::BTreeSet::new();
        for s in &self.steps {
            if !ids.insert(s.id()) {
                return fail(format!("duplicate step id `{}`", s.id()));
            }
        }
        Ok(())
    }
}

/// serde_json appends " at line L column C"; the position is reported apart.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "schema": "codepth-scenario/1",
        "name": "ci",
        "ring": {"vars": ["x", "y"]},
        "ideal": ["x", "y"],
        "steps": [{"command": "lc"}]
    }"#;

    #[test]
    fn minimal_scenario_parses_with_defaults() {
        let sc = Scenario::parse(MINIMAL).unwrap();
        assert_eq!(sc.ring.field, "q");
        assert_eq!(sc.budget.max_level, 6);
        assert_eq!(sc.steps[0].id(), "lc");
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let bad = "{\n  \"schema\": \"codepth-scenario/1\",\n  \"name\" \"x\"\n}";
        match Scenario::parse(bad) {
            Err(CliError::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = MINIMAL.replace("\"name\"", "\"nmae\": 1, \"name\"");
        assert!(matches!(Scenario::parse(&bad), Err(CliError::Parse { .. })));
    }

    #[test]
    fn wrong_schema_is_a_validation_error() {
        let bad = MINIMAL.replace("codepth-scenario/1", "codepth-scenario/0");
        assert!(matches!(Scenario::parse(&bad), Err(CliError::Validation(_))));
    }

    #[test]
    fn module_declarations_nest() {
        let text = r#"{"kind": "sum", "parts": [
            {"kind": "inverse", "neg": ["x", "y"]},
            {"kind": "quotient", "of": {"kind": "local-cohomology", "index": 2}, "by": ["q"]}
        ]}"#;
        let m: ModuleDecl = serde_json::from_str(text).unwrap();
        assert!(matches!(m, ModuleDecl::Sum { ref parts } if parts.len() == 2));
    }
}
