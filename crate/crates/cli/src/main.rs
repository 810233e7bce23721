use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mbhom::algebra::{InducedMap, IntMatrix};
use mbhom::complex::{assemble, default_k_max, morse_bott_homology, ComplexError};
use mbhom::continuation::{
    chain_homotopy_sides, chain_map_from_continuation, verify_chain_map, ContinuationError,
};
use mbhom::flow::{validate_all, Report};
use mbhom::io::{self, IoError};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "mbhom",
    version,
    about = "Morse-Bott homology from flow-category documents"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every validator on a category document.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Integral homology of the assembled complex.
    Homology {
        file: PathBuf,
        #[arg(long)]
        k_max: Option<i64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check a continuation and print the induced maps.
    Continuation {
        /// Source category document.
        src: PathBuf,
        /// Target category document.
        dst: PathBuf,
        /// Continuation document from `src` to `dst`.
        cont: PathBuf,
        /// Homotopy document; the continuations it names are looked up next
        /// to it, next to `cont`, then in the fixture directory.
        #[arg(long)]
        homotopy: Option<PathBuf>,
    },
    /// Write the boundary matrices as JSON.
    Export {
        file: PathBuf,
        #[arg(long)]
        matrices: PathBuf,
    },
}

/// A failed command: exit code plus a single stderr line led by `token`.
struct Failure {
    code: u8,
    token: &'static str,
    message: String,
    report: Option<Report>,
}

impl Failure {
    fn new(code: u8, token: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            token,
            message: message.into(),
            report: None,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        let code = if matches!(e, IoError::Validation(_)) {
            2
        } else {
            1
        };
        let message = e.to_string();
        let message = message
            .split_once(' ')
            .map_or(String::new(), |(_, m)| m.to_string());
        Self {
            code,
            token: e.kind(),
            message,
            report: e.report().cloned(),
        }
    }
}

impl From<ComplexError> for Failure {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::DSquaredViolation { .. } => {
                Self::new(2, "ValidationError", e.to_string())
            }
            ComplexError::Algebra(a) => Self::new(1, "AlgebraError", a.to_string()),
        }
    }
}

impl From<ContinuationError> for Failure {
    fn from(e: ContinuationError) -> Self {
        match e {
            ContinuationError::Complex(c) => c.into(),
            other => Self::new(2, "ValidationError", other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let first = e.to_string();
            let first = first
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            eprintln!("UsageError: {first}");
            return ExitCode::from(1);
        }
    };
    let out = match cli.cmd {
        Cmd::Validate { file, format } => validate(&file, format),
        Cmd::Homology {
            file,
            k_max,
            format,
        } => homology(&file, k_max, format),
        Cmd::Continuation {
            src,
            dst,
            cont,
            homotopy,
        } => continuation(&src, &dst, &cont, homotopy.as_deref()),
        Cmd::Export { file, matrices } => export(&file, &matrices),
    };
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{} {}", f.token, f.message);
            if let Some(r) = f.report {
                for d in r.diagnostics.iter().skip(1) {
                    eprintln!("  {d}");
                }
            }
            ExitCode::from(f.code)
        }
    }
}

fn validate(path: &Path, format: Format) -> Outcome {
    let fc = io::parse_flow_category_unchecked(&io::read(path)?)?;
    let report = validate_all(&fc);
    match format {
        Format::Json => {
            let v = json!({
                "name": fc.name,
                "valid": report.is_valid(),
                "diagnostics": report.diagnostics,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("report serializes")
            );
        }
        Format::Text => {
            if report.is_valid() {
                println!("{}: valid", fc.name);
            } else {
                print!("{report}");
            }
        }
    }
    if report.is_valid() {
        Ok(())
    } else {
        let rules: Vec<String> = report
            .diagnostics
            .iter()
            .map(|d| d.rule.to_string())
            .collect();
        let mut rules_unique = rules.clone();
        rules_unique.dedup();
        Err(Failure::new(
            2,
            "ValidationError",
            format!(
                "{}: {} violation(s) of {}",
                fc.name,
                rules.len(),
                rules_unique.join(", ")
            ),
        ))
    }
}

fn homology(path: &Path, k_max: Option<i64>, format: Format) -> Outcome {
    let fc = io::load_flow_category(path)?;
    if let Some(k) = k_max {
        if k < 0 {
            return Err(Failure::new(
                1,
                "UsageError",
                "--k-max must be non-negative",
            ));
        }
    }
    let k = k_max.unwrap_or_else(|| default_k_max(&fc));
    let h = morse_bott_homology(&fc, Some(k))?;
    match format {
        Format::Text => println!("{h}"),
        Format::Json => {
            let groups: Vec<_> = h
                .groups
                .iter()
                .map(|(d, g)| {
                    json!({
                        "degree": d,
                        "betti": g.betti,
                        "torsion": g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let v = json!({ "name": fc.name, "k_max": k, "homology": groups });
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("homology serializes")
            );
        }
    }
    Ok(())
}

fn rows(m: &IntMatrix) -> String {
    let rs: Vec<String> = (0..m.rows())
        .map(|i| {
            let xs: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
            format!("[{}]", xs.join(","))
        })
        .collect();
    format!("[{}]", rs.join(","))
}

/// "identity" for a self-map inducing the identity, else one entry per degree.
fn describe(maps: &[InducedMap], self_map: bool) -> String {
    if self_map && maps.iter().all(InducedMap::is_identity) {
        return "identity".into();
    }
    let parts: Vec<String> = maps
        .iter()
        .map(|m| {
            let flag = if m.is_iso { "iso" } else { "not iso" };
            format!(
                "H_{} {} -> {} {} {}",
                m.degree,
                m.source,
                m.target,
                rows(&m.matrix),
                flag
            )
        })
        .collect();
    parts.join("; ")
}

fn continuation(src: &Path, dst: &Path, cont: &Path, homotopy: Option<&Path>) -> Outcome {
    let source = io::load_flow_category(src)?;
    let target = io::load_flow_category(dst)?;
    let cd = io::parse_continuation(&io::read(cont)?, &source, &target)?;
    let map = chain_map_from_continuation(&cd, None)?;
    if !verify_chain_map(&map.matrices, &map.source, &map.target) {
        println!("chain map: FAILED");
        return Err(Failure::new(
            2,
            "ChainMapError",
            format!("{} does not commute with the boundary", cd.name),
        ));
    }
    println!(
        "chain map: OK; induced: {}",
        describe(&map.induced()?, source == target)
    );
    if let Some(h) = homotopy {
        let mut dirs: Vec<PathBuf> = [h, cont]
            .iter()
            .filter_map(|p| p.parent())
            .map(|p| {
                if p.as_os_str().is_empty() {
                    PathBuf::from(".")
                } else {
                    p.to_path_buf()
                }
            })
            .collect();
        dirs.push(io::fixtures_dir());
        let hd = io::load_homotopy(h, &dirs)?;
        if let Err(e) = hd.check_references() {
            return Err(Failure::new(1, "ReferenceError", e));
        }
        let sides = chain_homotopy_sides(&hd)?;
        if !sides.holds() {
            println!("chain homotopy: FAILED");
            return Err(Failure::new(
                2,
                "ChainHomotopyError",
                format!("{} fails in degrees {:?}", hd.name, sides.failing_degrees()),
            ));
        }
        println!("chain homotopy: OK");
    }
    Ok(())
}

fn export(path: &Path, out: &Path) -> Outcome {
    let fc = io::load_flow_category(path)?;
    let c = assemble(&fc, default_k_max(&fc))?;
    let text = io::pretty(&io::export_matrices(&fc.name, &c));
    std::fs::write(out, text + "\n")
        .map_err(|e| Failure::new(1, "IoError", format!("{}: {e}", out.display())))?;
    println!("wrote {}", out.display());
    Ok(())
}
