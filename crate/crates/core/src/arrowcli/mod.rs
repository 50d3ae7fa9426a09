//! Arrow do-notation, text terms, pictures and the command line.

pub mod cli;
mod lex;
pub mod program;
pub mod render;
pub mod term;
pub mod valuation;

pub use lex::Pos;
pub use program::{compile, elaborate, parse_program, ElaborateOptions, Elaborated, Program, ProgramError};
pub use render::{render_diagram, render_eff, Format, RenderSpec};
pub use term::{diagram_term, eff_term, eff_to_term, parse_term, Term, TermError};
