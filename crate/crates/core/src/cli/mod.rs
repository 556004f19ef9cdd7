//! The `boxlogic` command line.

mod expr;
mod spec_file;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::box_world::{BoxSpec, BoxWorld, BuiltWorld, TwoBoxLogic};
use crate::error::{Error, Result};
use crate::logic::{verify_logic_axioms, DEFAULT_BUDGET};
use crate::products::{verify_world, LogicFacts};
use crate::states::{
    chsh_value, ns_polytope, polytope_vertices, pr_box_state, two_valued_states, Behavior,
};

pub use expr::parse_event;
pub use spec_file::{parse_spec, parse_spec_str};

/// Largest polytope dimension handed to vertex enumeration by default.
pub const DEFAULT_MAX_DIMENSION: usize = 24;

#[derive(Debug, Parser)]
#[command(
    name = "boxlogic",
    version,
    about = "Quantum logics of no-signaling box worlds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Box-world spec file (JSON or `key = value` lines).
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,

    /// Directory to write artifacts into, in addition to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Maximum number of logic elements a closure may produce.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Maximum dimension of the state polytope for vertex enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DIMENSION)]
    pub max_dimension: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the single-box and two-box logics.
    Build,
    /// Check the logic axioms on every built logic.
    Axioms,
    /// Two-valued states and vertices of the no-signaling polytope.
    States,
    /// Product-structure verification.
    Verify,
    /// CHSH value of a behavior.
    Chsh {
        #[arg(long, conflicts_with = "pr")]
        behavior: Option<PathBuf>,
        /// Use the built-in PR box.
        #[arg(long)]
        pr: bool,
    },
    /// Value of a behavior on an event expression such as `[1:{0}, *]`.
    Evaluate {
        expression: String,
        #[arg(long, conflicts_with = "pr")]
        behavior: Option<PathBuf>,
        #[arg(long)]
        pr: bool,
    },
}

/// What a command produced: text for stdout, named artifacts, and whether
/// every check passed.
pub struct Outcome {
    pub stdout: String,
    pub artifacts: Vec<(String, String)>,
    pub passed: bool,
}

/// Pretty JSON with a trailing newline.
pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn json_outcome(name: &str, v: Value, passed: bool) -> Outcome {
    let text = json_text(&v);
    Outcome {
        stdout: text.clone(),
        artifacts: vec![(format!("{name}.json"), text)],
        passed,
    }
}

fn chsh_world() -> BoxWorld {
    let binary = || BoxSpec::new(vec![2, 2]).expect("valid spec");
    BoxWorld::new(binary(), binary()).expect("valid world")
}

impl Cli {
    fn world(&self) -> Result<BoxWorld> {
        match &self.spec {
            Some(p) => parse_spec(p),
            None => Err(Error::Input("this command needs --spec PATH".into())),
        }
    }

    /// The spec's world, or the CHSH scenario when only the PR box is used.
    fn world_or_chsh(&self, pr: bool) -> Result<BoxWorld> {
        match (&self.spec, pr) {
            (None, true) => Ok(chsh_world()),
            _ => self.world(),
        }
    }

    fn behavior(&self, world: &BoxWorld, path: Option<&Path>, pr: bool) -> Result<Behavior> {
        match (path, pr) {
            (_, true) => {
                let b = pr_box_state();
                if !b.fits(world) {
                    return Err(Error::Input(
                        "the PR box lives in the (2,2) x (2,2) world".into(),
                    ));
                }
                Ok(b)
            }
            (Some(p), false) => {
                let text = std::fs::read_to_string(p)?;
                Behavior::from_json(world, &serde_json::from_str(&text)?)
            }
            (None, false) => Err(Error::Input("pass --behavior PATH or --pr".into())),
        }
    }

    pub fn execute(&self) -> Result<Outcome> {
        match &self.command {
            Command::Build => self.build(),
            Command::Axioms => self.axioms(),
            Command::States => self.states(),
            Command::Verify => self.verify(),
            Command::Chsh { behavior, pr } => {
                let world = self.world_or_chsh(*pr)?;
                let b = self.behavior(&world, behavior.as_deref(), *pr)?;
                Ok(json_outcome(
                    "chsh",
                    json!({"chsh": chsh_value(&b)?.to_string()}),
                    true,
                ))
            }
            Command::Evaluate {
                expression,
                behavior,
                pr,
            } => {
                let world = self.world_or_chsh(*pr)?;
                let b = self.behavior(&world, behavior.as_deref(), *pr)?;
                let logic = TwoBoxLogic::build(&world, self.budget)?;
                let event = parse_event(&world, expression)?;
                logic.logic().require(&event)?;
                let value = b.evaluate(&logic, &event)?;
                Ok(json_outcome(
                    "evaluate",
                    json!({"expression": expression, "event": event.to_hex(), "value": value.to_string()}),
                    true,
                ))
            }
        }
    }

    fn build(&self) -> Result<Outcome> {
        let built = BuiltWorld::build(self.world()?, self.budget)?;
        let logics = [
            ("left", built.left.logic()),
            ("right", built.right.logic()),
            ("composite", built.composite.logic()),
        ];
        let doc = json!({
            "left": built.left.logic().export(),
            "right": built.right.logic().export(),
            "composite": built.composite.logic().export(),
            "witness": built.witness,
        });
        let json = json_text(&doc);
        let mut artifacts = vec![("logic.json".to_string(), json.clone())];
        for (name, logic) in logics {
            artifacts.push((format!("{name}.dot"), logic.hasse_dot()));
        }
        let stdout = match self.format {
            Format::Json => json,
            Format::Dot => built.composite.logic().hasse_dot(),
        };
        Ok(Outcome {
            stdout,
            artifacts,
            passed: true,
        })
    }

    fn axioms(&self) -> Result<Outcome> {
        let built = BuiltWorld::build(self.world()?, self.budget)?;
        let reports: Vec<_> = [
            ("left", built.left.logic()),
            ("right", built.right.logic()),
            ("composite", built.composite.logic()),
        ]
        .into_iter()
        .map(|(name, logic)| {
            let mut r = verify_logic_axioms(logic);
            r.subject = name.to_string();
            r
        })
        .collect();
        let passed = reports.iter().all(|r| r.passed());
        Ok(json_outcome(
            "axioms",
            json!({"passed": passed, "reports": reports}),
            passed,
        ))
    }

    fn states(&self) -> Result<Outcome> {
        let world = self.world()?;
        let logic = TwoBoxLogic::build(&world, self.budget)?;
        let two_valued: Vec<Value> = two_valued_states(&logic)?
            .iter()
            .map(|s| s.behavior().to_json())
            .collect();
        let polytope = ns_polytope(&world);
        let vertices = polytope_vertices(&polytope, self.max_dimension)?;
        let integral = vertices.iter().filter(|v| v.is_deterministic()).count();
        let doc = json!({
            "two_valued_states": {"count": two_valued.len(), "behaviors": two_valued},
            "polytope": {
                "variables": polytope.variables,
                "equalities": polytope.equalities,
                "nonnegative": polytope.nonnegative,
                "vertex_count": vertices.len(),
                "integral_vertex_count": integral,
                "vertices": vertices.iter().map(Behavior::to_json).collect::<Vec<_>>(),
            },
        });
        Ok(json_outcome("states", doc, true))
    }

    fn verify(&self) -> Result<Outcome> {
        let built = BuiltWorld::build(self.world()?, self.budget)?;
        let (doc, passed) = verification_document(&built, self.max_dimension)?;
        Ok(json_outcome("verify", doc, passed))
    }
}

/// The JSON document printed by `verify`, and whether every check passed.
/// Weak-condition checks are listed under `skipped` when the polytope is
/// larger than `max_dimension`.
pub fn verification_document(built: &BuiltWorld, max_dimension: usize) -> Result<(Value, bool)> {
    let (vertices, skipped) = match polytope_vertices(&ns_polytope(&built.world), max_dimension) {
        Ok(v) => (Some(v), Vec::new()),
        Err(Error::Budget(reason)) => (
            None,
            vec![
                json!({"checks": ["weak.ii_double_prime.vertex_certified", "weak.ii_prime.vertex_certified"], "reason": reason}),
            ],
        ),
        Err(e) => return Err(e),
    };
    let report = verify_world(built, vertices.as_deref())?;
    let passed = report.passed();
    let doc = json!({
        "passed": passed,
        "facts": {
            "left": LogicFacts::of(built.left.logic()),
            "right": LogicFacts::of(built.right.logic()),
            "composite": LogicFacts::of(built.composite.logic()),
        },
        "checks": report.checks,
        "skipped": skipped,
    });
    Ok((doc, passed))
}

/// Short machine-readable name of an error's category.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Input(_) => "input",
        Error::NotAMember(_) => "not_a_member",
        Error::Precondition(_) => "precondition",
        Error::Budget(_) => "budget",
        Error::Normalization { .. } | Error::Range { .. } | Error::Signaling { .. } => {
            "invalid_behavior"
        }
        Error::NotAState(_) => "not_a_state",
        Error::Invariant(_) => "invariant",
        Error::Spec { .. } => "spec",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    }
}

fn write_artifacts(dir: &Path, artifacts: &[(String, String)]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, text) in artifacts {
        std::fs::write(dir.join(name), text)?;
    }
    Ok(())
}

/// Runs a parsed command line and returns the process exit code: 0 when
/// every check passed, 1 when a check failed, 2 on errors.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = cli.execute().and_then(|outcome| {
        if let Some(dir) = &cli.out {
            write_artifacts(dir, &outcome.artifacts)?;
        }
        stdout.write_all(outcome.stdout.as_bytes())?;
        Ok(outcome.passed)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let doc = json!({"error": {"kind": error_kind(&e), "message": e.to_string()}});
            let _ = stderr.write_all(json_text(&doc).as_bytes());
            2
        }
    }
}

pub fn main() -> i32 {
    let cli = Cli::parse();
    run(
        &cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
