use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use c3_core::exactmath::{RatFunc, Rational};
use c3_core::kuranishi::Dgla;
use c3_core::liealg::{build_c3, tanaka_prolongation, C3Algebra};
use c3_core::pipeline::{
    audit, classify_all, emit_report, enumerate_classes, resolve_class, verify_models, workers, ClassDescriptor, Document,
    Format, PipelineError,
};

/// Homogeneous C3 Monge models: classification and model checks.
#[derive(Parser)]
#[command(name = "c3", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the classification for all classes or one of them.
    Classify {
        #[arg(long)]
        class: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        output: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the embedded model tables.
    VerifyModels {
        #[arg(long)]
        model: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        output: Format,
    },
    /// Dimensions of the Tanaka prolongation of g₋.
    Prolong,
    /// Betti numbers of the deformation complex of a class, by E-weight.
    Betti {
        #[arg(long)]
        class: String,
    },
    /// Structure constants of sp(6) in the graded basis, as JSON.
    DumpAlgebra,
}

enum Outcome {
    Ok,
    Mismatch,
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn write(text: &str, out: Option<&PathBuf>) -> Result<(), PipelineError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| PipelineError::Inconsistent(format!("{}: {e}", p.display()))),
        None => {
            emit(text);
            Ok(())
        }
    }
}

fn classify(c3: &C3Algebra, class: Option<&str>, output: Format, out: Option<&PathBuf>) -> Result<Outcome, PipelineError> {
    let catalog = enumerate_classes(c3)?;
    let n = workers();
    let (selected, models) = match class {
        Some(l) => (vec![resolve_class(&catalog, c3, l)?], Vec::new()),
        None => (catalog.clone(), verify_models(c3, None, n)?),
    };
    let classes = if class.is_some() {
        // one member only: no special points
        let ctx = c3_core::cartan::CartanContext::<RatFunc>::new(c3)?;
        vec![c3_core::pipeline::run_class(&selected[0], c3, &ctx)?]
    } else {
        classify_all(&selected, c3, n)?
    };
    let mismatches = audit(&catalog, &classes, &models);
    let ok = mismatches.is_empty();
    let doc = Document { classes, models, mismatches };
    write(&emit_report(&doc, output)?, out)?;
    Ok(if ok { Outcome::Ok } else { Outcome::Mismatch })
}

fn betti(c3: &C3Algebra, desc: &ClassDescriptor) -> Result<String, PipelineError> {
    fn table<F: c3_core::exactmath::Field>(l: &Dgla<F>) -> String {
        let mut s = String::new();
        for (p, name) in [(0, "b1"), (1, "b2"), (2, "b3")] {
            let b = l.betti(p);
            let cells: Vec<String> = b.iter().filter(|(_, n)| **n > 0).map(|(w, n)| format!("{w}:{n}")).collect();
            s.push_str(&format!("{name}  {}\n", if cells.is_empty() { "0".into() } else { cells.join("  ") }));
        }
        s
    }
    let head = format!("{} (k0 = {}), E-weight:dim\n", desc.label, desc.k0.join(", "));
    let body = if desc.is_parametric() {
        table(&Dgla::new(desc.subalgebra::<RatFunc>(c3)?, true)?)
    } else {
        table(&Dgla::new(desc.subalgebra::<Rational>(c3)?, true)?)
    };
    Ok(head + &body)
}

fn run(cli: Cli) -> Result<Outcome, PipelineError> {
    let c3 = build_c3();
    match cli.cmd {
        Cmd::Classify { class, output, out } => classify(&c3, class.as_deref(), output, out.as_ref()),
        Cmd::VerifyModels { model, output } => {
            let models = verify_models(&c3, model.as_deref(), workers())?;
            let ok = models.iter().all(|m| m.passed());
            let doc = Document { classes: Vec::new(), models, mismatches: Vec::new() };
            emit(&emit_report(&doc, output)?);
            Ok(if ok { Outcome::Ok } else { Outcome::Mismatch })
        }
        Cmd::Prolong => {
            let p = tanaka_prolongation(&c3.negative_part(), 6)?;
            let mut s = String::new();
            for d in -3..0 {
                s += &format!("{d:>3} {}\n", c3.indices_of_degree(d).len());
            }
            for (d, n) in &p.dims {
                s += &format!("{d:>3} {n}\n");
            }
            let iso = p.isomorphism_to(&c3.g, &c3.negative_indices()).is_ok();
            s += &format!("total {}\nisomorphic to sp(6): {iso}\n", p.dim());
            emit(&s);
            Ok(if iso && p.dim() == c3.dim() { Outcome::Ok } else { Outcome::Mismatch })
        }
        Cmd::Betti { class } => {
            let catalog = enumerate_classes(&c3)?;
            emit(&betti(&c3, &resolve_class(&catalog, &c3, &class)?)?);
            Ok(Outcome::Ok)
        }
        Cmd::DumpAlgebra => {
            emit(&(c3.g.to_json() + "\n"));
            Ok(Outcome::Ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
