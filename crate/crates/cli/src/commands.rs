//! The `solve`, `optimal` and `gen` subcommands as pure functions from input
//! text to an exit code plus output, so they can be tested without a process.

use chipfire::engine::{run_greedy, EngineError, RunOptions};
use chipfire::instance::TraceReport;
use chipfire::renorm::minimal_representative;
use chipfire::solver::{verify_theorem, SolveOptions, SolverError};
use chipfire::Instance;
use serde_json::json;

use crate::cli::{Format, GenArgs, OptimalArgs, SolveArgs};
use crate::family_params::build_family;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_UNWINNABLE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;
/// `optimal` only: the report was computed but the bound failed.
pub const EXIT_BOUND_FAILED: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn fail(code: i32, stderr: String) -> Self {
        Output {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

fn to_line<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable output");
    s.push('\n');
    s
}

pub fn solve(text: &str, args: &SolveArgs) -> Output {
    let instance = match Instance::from_json(text) {
        Ok(i) => i,
        Err(e) => return Output::fail(EXIT_MALFORMED, format!("error: {e}\n")),
    };
    let side = args.side.unwrap_or(instance.side);
    let options = RunOptions {
        policy: args.policy,
        max_steps: args.max_steps,
        record_states: args.trace,
        negative_degree_shortcut: false,
    };
    match run_greedy(&instance.graph, &instance.divisor, side, &options) {
        Ok(outcome) => {
            let report = TraceReport::from_outcome(&outcome, &instance.divisor, args.trace);
            let code = if outcome.is_settled() {
                EXIT_OK
            } else {
                EXIT_UNWINNABLE
            };
            Output {
                code,
                stdout: to_line(&report),
                stderr: String::new(),
            }
        }
        Err(EngineError::StepLimitExceeded { trace, .. }) => Output {
            code: EXIT_LIMIT,
            stdout: to_line(&TraceReport::step_limit(&trace, args.trace)),
            stderr: format!("error: step limit of {} reached\n", args.max_steps),
        },
        Err(e) => Output::fail(EXIT_MALFORMED, format!("error: {e}\n")),
    }
}

pub fn optimal(text: &str, args: &OptimalArgs) -> Output {
    let instance = match Instance::from_json(text) {
        Ok(i) => i,
        Err(e) => return Output::fail(EXIT_MALFORMED, format!("error: {e}\n")),
    };
    let side = args.side.unwrap_or(instance.side);
    let options = SolveOptions {
        method: args.method,
        radius_cap: args.cap,
        coset_budget: args.budget,
        ..Default::default()
    };
    let report = match verify_theorem(&instance.graph, &instance.divisor, side, &options) {
        Ok(r) => r,
        Err(e @ SolverError::GreedyFailed(_)) => {
            return Output::fail(EXIT_UNWINNABLE, format!("error: {e}\n"))
        }
        Err(
            e @ (SolverError::CapExceeded { .. }
            | SolverError::BudgetExceeded { .. }
            | SolverError::StateLimitExceeded { .. }
            | SolverError::Engine(EngineError::StepLimitExceeded { .. })),
        ) => return Output::fail(EXIT_LIMIT, format!("error: {e}\n")),
        Err(e) => return Output::fail(EXIT_MALFORMED, format!("error: {e}\n")),
    };

    let stdout = if args.explain {
        let greedy = run_greedy(
            &instance.graph,
            &instance.divisor,
            side,
            &RunOptions {
                record_states: false,
                ..Default::default()
            },
        )
        .ok()
        .and_then(|o| o.into_settled())
        .expect("greedy run already succeeded");
        to_line(&json!({
            "report": report,
            "explain": minimal_representative(&greedy.aggregate),
        }))
    } else {
        to_line(&report)
    };
    Output {
        code: if report.holds {
            EXIT_OK
        } else {
            EXIT_BOUND_FAILED
        },
        stdout,
        stderr: String::new(),
    }
}

/// Rendered instance text (JSON line or DOT).
pub fn gen(args: &GenArgs) -> Result<String, String> {
    let instance = build_family(&args.family, &args.params).map_err(|e| e.to_string())?;
    Ok(match args.format {
        Format::Json => {
            let mut s = instance.to_json();
            s.push('\n');
            s
        }
        Format::Dot => instance.to_dot(),
    })
}
