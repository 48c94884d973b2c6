//! `levelmcg`: homology actions, word enumeration, free-group tools and the
//! verification ledger from the command line.

use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use levelmcg::finitegrp::todd_coxeter;
use levelmcg::homology::{level_member, phi, psi, word_matrix, H1Class, SurfaceCtx};
use levelmcg::ledger::{self, aggregate, CheckParams, Status};
use levelmcg::pi1free::{fold, prop34_relators, prop52_claimed_gens, FreeWord, Pi1Ctx, DEFAULT_COSET_CAP};
use levelmcg::words::{
    enum_family, thm_gen_n_sets, thm_main2_normal_generators, thm_main3_generators, transversal_2y, transversal_2z,
    BoundaryRange, Family, McgWord,
};

const REPORT_DIR_VAR: &str = "LEVELMCG_REPORT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Md,
}

#[derive(Debug, Parser)]
#[command(name = "levelmcg", version, about = "Level-d mapping class groups of non-orientable surfaces")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Truncate long enumerations after this many items.
    #[arg(long, global = true)]
    limit: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SetName {
    #[value(name = "Y")]
    Y,
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    #[value(name = "C")]
    C,
    #[value(name = "D")]
    D,
    #[value(name = "2Y")]
    TwoY,
    #[value(name = "2Z")]
    TwoZ,
    #[value(name = "thm-main2")]
    Main2,
    #[value(name = "thm-main3")]
    Main3,
    #[value(name = "thm-gen-n")]
    GenN,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Image of a homology class under a word.
    Act {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        word: String,
        /// Class such as `a1 + 2a3`.
        #[arg(long)]
        class: String,
    },
    /// Φ: the action on H_1 modulo the class of α_{1,…,g}.
    Phi {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        word: String,
    },
    /// Ψ: the action on H_1 with Z/2 coefficients.
    Psi {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        word: String,
    },
    /// Does the word act trivially on H_1(Z/d)?
    Member {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        word: String,
    },
    /// Stream a family or generating set.
    Enum {
        #[arg(long, value_enum)]
        set: SetName,
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value_t = 2)]
        level: u32,
        #[arg(long, default_value_t = 0)]
        boundaries: usize,
        /// Tower level for `2Z`.
        #[arg(long, default_value_t = 3)]
        tower: u32,
        /// Use the larger boundary index range for `thm-main2`.
        #[arg(long)]
        conclusion_range: bool,
    },
    /// Stallings graph of a subgroup of π₁ (or of π₁⁺ with `--plus`).
    Fold {
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value_t = 1)]
        boundaries: usize,
        /// Generators separated by `;`, e.g. `x1^2; x1 x4`.
        #[arg(long, conflicts_with = "claimed")]
        gens: Option<String>,
        /// Use the transversal conjugates generating ker θ at `--level`.
        #[arg(long, requires = "level")]
        claimed: bool,
        #[arg(long)]
        level: Option<u32>,
        /// Rewrite into the free basis of the two-sided subgroup first.
        #[arg(long)]
        plus: bool,
        /// Membership query.
        #[arg(long)]
        word: Option<String>,
    },
    /// Todd–Coxeter enumeration of π₁⁺ / ker θ from its normal generators.
    Coset {
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value_t = 1)]
        boundaries: usize,
        #[arg(long)]
        level: u32,
        #[arg(long, default_value_t = DEFAULT_COSET_CAP)]
        cap: usize,
    },
    /// Run ledger checks.
    Verify {
        /// A check id, a comma-separated list, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Parameters such as `g=4,d=2`.
        #[arg(long, default_value = "")]
        params: String,
        /// Report directory; defaults to $LEVELMCG_REPORT_DIR, then `.`.
        #[arg(long)]
        report_dir: Option<PathBuf>,
        /// Do not write a report file.
        #[arg(long)]
        no_report: bool,
        /// List the catalog instead of running it.
        #[arg(long)]
        list: bool,
    },
}

/// A usage-level failure (exit 2).
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match run(&cli, &mut out) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = out.flush();
            eprintln!("error: {msg}");
            2
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}

fn emit_value(out: &mut impl Write, v: &Value) -> Result<(), Usage> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn ctx(g: usize) -> Result<SurfaceCtx, Usage> {
    Ok(SurfaceCtx::new(g)?)
}

fn run(cli: &Cli, out: &mut impl Write) -> Result<u8, Usage> {
    match &cli.command {
        Command::Act { genus, word, class } => {
            let w = McgWord::parse(word, *genus)?;
            let x = H1Class::parse(class, *genus)?;
            let image = x.act(&word_matrix(&w, ctx(*genus)?)?)?.normalize();
            match cli.format {
                Format::Json => emit_value(out, &json!({ "word": w.to_string(), "class": x.to_string(), "image": image.to_string() }))?,
                _ => writeln!(out, "{image}")?,
            }
        }
        Command::Phi { genus, word } => {
            let w = McgWord::parse(word, *genus)?;
            let m = phi(&w, ctx(*genus)?)?;
            print_matrix(cli.format, out, &w, m.rows().iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect(), &m.to_string())?;
        }
        Command::Psi { genus, word } => {
            let w = McgWord::parse(word, *genus)?;
            let m = psi(&w, ctx(*genus)?)?;
            let n = m.dim();
            let rows = (0..n).map(|i| (0..n).map(|j| m.get(i, j).to_string()).collect()).collect();
            print_matrix(cli.format, out, &w, rows, &m.to_string())?;
        }
        Command::Member { genus, level, word } => {
            let w = McgWord::parse(word, *genus)?;
            let ok = level_member(&w, *level, ctx(*genus)?)?;
            match cli.format {
                Format::Json => emit_value(out, &json!({ "word": w.to_string(), "level": level, "member": ok }))?,
                _ => writeln!(out, "{ok}")?,
            }
        }
        Command::Enum { set, genus, level, boundaries, tower, conclusion_range } => {
            run_enum(cli, out, *set, *genus, *level, *boundaries, *tower, *conclusion_range)?;
        }
        Command::Fold { genus, boundaries, gens, claimed, level, plus, word } => {
            let c = Pi1Ctx::new(*genus, *boundaries)?;
            let mut list: Vec<FreeWord> = if *claimed {
                prop52_claimed_gens(*genus, *boundaries, level.expect("required by clap"))?
            } else {
                let text = gens.as_deref().ok_or_else(|| Usage("either --gens or --claimed is required".into()))?;
                text.split(';').filter(|s| !s.trim().is_empty()).map(|s| c.parse(s)).collect::<Result<_, _>>()?
            };
            let mut query = word.as_deref().map(|s| c.parse(s)).transpose()?;
            let rank = if *plus || *claimed {
                list = list.iter().map(|w| c.rewrite(w)).collect::<Result<_, _>>()?;
                query = query.map(|q| c.rewrite(&q)).transpose()?;
                c.basis_rank()
            } else {
                c.rank()
            };
            let graph = fold(rank, &list);
            let contains = query.as_ref().map(|q| graph.contains(q));
            match cli.format {
                Format::Json => {
                    let mut v = graph.to_json();
                    v["contains"] = json!(contains);
                    emit_value(out, &v)?;
                }
                _ => {
                    writeln!(out, "vertices: {}", graph.vertices())?;
                    match graph.index() {
                        Some(i) => writeln!(out, "index: {i}")?,
                        None => writeln!(out, "index: infinite")?,
                    }
                    if let Some(b) = contains {
                        writeln!(out, "contains: {b}")?;
                    }
                }
            }
        }
        Command::Coset { genus, boundaries, level, cap } => {
            let c = Pi1Ctx::new(*genus, *boundaries)?;
            let rels: Vec<Vec<i32>> = prop34_relators(*genus, *boundaries, *level)?
                .iter()
                .map(|w| w.letters().to_vec())
                .collect();
            match todd_coxeter(c.basis_rank(), &rels, *cap) {
                Ok(t) => match cli.format {
                    Format::Json => emit_value(out, &t.to_json())?,
                    _ => writeln!(out, "cosets: {}", t.cosets())?,
                },
                Err(levelmcg::finitegrp::TcError::Inconclusive { cap }) => {
                    writeln!(out, "inconclusive: coset cap {cap} reached")?;
                    return Ok(3);
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Verify { suite, params, report_dir, no_report, list } => {
            if *list {
                for spec in ledger::catalog() {
                    writeln!(out, "{}\t{}\t{}", spec.id, spec.params.join(","), spec.anchor)?;
                }
                return Ok(0);
            }
            let mut p: CheckParams = params.parse()?;
            if let Some(s) = cli.seed {
                p.seed = s;
            }
            let records = ledger::run_suite(suite, &p)?;
            let report = ledger::to_json(&records);
            match cli.format {
                Format::Json => emit_value(out, &report)?,
                Format::Md => write!(out, "{}", ledger::to_markdown(&records))?,
                Format::Text => {
                    for r in &records {
                        let ps: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                        let summary = r.details.get("summary").and_then(Value::as_str).unwrap_or_default();
                        writeln!(out, "{:<12} {:<17} {:<16} {summary}", r.status.to_string().to_uppercase(), r.id, ps.join(","))?;
                    }
                }
            }
            if !*no_report {
                let dir = report_dir
                    .clone()
                    .or_else(|| std::env::var_os(REPORT_DIR_VAR).map(PathBuf::from))
                    .unwrap_or_else(|| PathBuf::from("."));
                std::fs::create_dir_all(&dir)?;
                let path = dir.join(report_name(suite, params));
                std::fs::write(&path, serde_json::to_string_pretty(&report)? + "\n")?;
                eprintln!("report written to {}", path.display());
            }
            return Ok(match aggregate(&records) {
                Status::Pass => 0,
                Status::Fail => 1,
                Status::Inconclusive => 3,
            });
        }
    }
    Ok(0)
}

fn report_name(suite: &str, params: &str) -> String {
    let clean = |s: &str| -> String {
        s.chars()
            .filter(|c| !c.is_whitespace() && *c != '=')
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
            .collect()
    };
    let p = clean(params);
    format!("report-{}-{}.json", clean(suite), if p.is_empty() { "default".into() } else { p })
}

fn print_matrix(format: Format, out: &mut impl Write, w: &McgWord, rows: Vec<Vec<String>>, text: &str) -> Result<(), Usage> {
    match format {
        Format::Text => writeln!(out, "{text}")?,
        Format::Json => emit_value(out, &json!({ "word": w.to_string(), "matrix": rows }))?,
        Format::Md => {
            let n = rows.first().map_or(0, Vec::len);
            writeln!(out, "|{}", " |".repeat(n))?;
            writeln!(out, "|{}", "---|".repeat(n))?;
            for r in rows {
                writeln!(out, "| {} |", r.join(" | "))?;
            }
        }
    }
    Ok(())
}

/// Streams items with an optional limit and a marker line on truncation.
struct Stream<'a, W: Write> {
    out: &'a mut W,
    format: Format,
    limit: Option<u64>,
    count: u64,
    items: Vec<Value>,
}

impl<'a, W: Write> Stream<'a, W> {
    fn new(out: &'a mut W, format: Format, limit: Option<u64>) -> Self {
        if format == Format::Md {
            let _ = writeln!(out, "| # | name | word |\n|---|---|---|");
        }
        Stream { out, format, limit, count: 0, items: Vec::new() }
    }

    fn full(&self) -> bool {
        self.limit.is_some_and(|l| self.count >= l)
    }

    /// Returns false once the limit is reached.
    fn push(&mut self, name: Option<&str>, word: &McgWord) -> Result<bool, Usage> {
        if self.full() {
            return Ok(false);
        }
        self.count += 1;
        match self.format {
            Format::Text => writeln!(self.out, "{word}")?,
            Format::Md => writeln!(self.out, "| {} | {} | `{word}` |", self.count, name.unwrap_or(""))?,
            Format::Json => self.items.push(match name {
                Some(n) => json!({ "name": n, "word": word.to_string() }),
                None => json!(word.to_string()),
            }),
        }
        Ok(true)
    }

    fn finish(self, total: u64) -> Result<(), Usage> {
        let truncated = self.count < total;
        match self.format {
            Format::Json => {
                let v = json!({ "total": total, "truncated": truncated, "items": self.items });
                writeln!(self.out, "{}", serde_json::to_string_pretty(&v)?)?;
            }
            _ if truncated => writeln!(self.out, "... truncated: {} of {total} shown", self.count)?,
            _ => {}
        }
        Ok(())
    }
}

#[allow(clippy::too_many_arguments)]
fn run_enum(
    cli: &Cli,
    out: &mut impl Write,
    set: SetName,
    g: usize,
    d: u32,
    n: usize,
    tower: u32,
    conclusion: bool,
) -> Result<(), Usage> {
    let mut s = Stream::new(out, cli.format, cli.limit);
    let total: u64 = match set {
        SetName::Y | SetName::A | SetName::B | SetName::C | SetName::D => {
            let family = match set {
                SetName::Y => Family::Y,
                SetName::A => Family::A,
                SetName::B => Family::B,
                SetName::C => Family::C,
                _ => Family::D,
            };
            let els = enum_family(family, g)?;
            for e in &els {
                if !s.push(None, &e.word)? {
                    break;
                }
            }
            els.len() as u64
        }
        SetName::TwoY => {
            let total = 1u64 << ((g.max(1) - 1) * (g.max(1) - 1));
            for w in transversal_2y(g)? {
                if !s.push(None, &w)? {
                    break;
                }
            }
            total
        }
        SetName::TwoZ => {
            let mut total = 0;
            let mut open = true;
            for w in transversal_2z(g, tower)? {
                total += 1;
                if open {
                    open = s.push(None, &w)?;
                }
            }
            total
        }
        SetName::Main2 => {
            let range = if conclusion { BoundaryRange::Conclusion } else { BoundaryRange::Statement };
            let recs = thm_main2_normal_generators(g, n, d, range)?;
            for r in &recs {
                if !s.push(Some(&r.name), &r.word)? {
                    break;
                }
            }
            recs.len() as u64
        }
        SetName::Main3 => {
            let stream = thm_main3_generators(g)?;
            for w in stream.iter() {
                if !s.push(None, &w)? {
                    break;
                }
            }
            stream.len()
        }
        SetName::GenN => {
            let sets = thm_gen_n_sets(g, n, d, &[])?;
            for w in &sets.h {
                if !s.push(None, w)? {
                    break;
                }
            }
            sets.h.len() as u64
        }
    };
    s.finish(total)
}
