//! Batch interface: session files in, matrices and verdicts out.
//!
//! A session declares rings, modules, complexes and maps, then lists `run`
//! commands. See `tests/fixtures` for complete examples.

pub mod commands;
pub mod error;
pub mod lexer;
pub mod session;

pub use commands::{run_all, run_command, Report, Status};
pub use error::{CliError, Pos};
pub use session::{parse_session, Command, CommandKind, Session, DEFAULT_WINDOW};

/// Exit codes: success, failed verification, usage or input error.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Everything a run produces, ready for printing.
#[derive(Debug)]
pub struct Outcome {
    pub session: Session,
    pub reports: Vec<Report>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.reports.iter().all(|r| r.status == Status::Ok) {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    }

    pub fn render(&self, machine: bool) -> String {
        let mut out = String::new();
        if !machine {
            out.push_str(&session_summary(&self.session));
        }
        for r in &self.reports {
            out.push_str(&if machine { r.machine() } else { r.human() });
        }
        out
    }
}

pub fn run_text(text: &str) -> Result<Outcome, CliError> {
    let session = parse_session(text)?;
    let reports = run_all(&session);
    Ok(Outcome { session, reports })
}

/// One line per ring: presentation, class and `pd` over the parent.
pub fn session_summary(s: &Session) -> String {
    let mut out = String::new();
    for d in &s.decls {
        if let session::Decl::Ring(r) = d {
            out.push_str(&format!("ring {}: {} [{}]", r.name, r.ring.describe(), session::class_text(r.ring.class())));
            if let (session::RingDef::Quotient { parent, .. }, Some(pd)) = (&r.def, r.pd_over_parent) {
                out.push_str(&format!(", pd_{parent} {} = {pd}", r.name));
            }
            out.push('\n');
        }
    }
    out
}
