//! The `zerosum` command line. [`run`] takes arguments and output sinks so
//! it can be driven from tests.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::additive;
use crate::error::Error;
use crate::invariants::{self, check_template, EnumOptions};
use crate::product::{self, verify_witness_line, SearchConfig, DEFAULT_BUDGET};
use crate::repro::{self, ReproConfig, Suite};
use crate::sequence::Sequence;
use crate::text;
use crate::theorem::{search_big_product_one, FamilyGroup, PipelineOptions, SearchOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CLAIM_FALSE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "zerosum", version, about = "Zero-sum computations over C_n x|_s C_2")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Emit line-oriented key=value records instead of prose.
    #[arg(long, global = true)]
    records: bool,

    /// Search state budget.
    #[arg(long, global = true, env = "ZEROSUM_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Worker threads for enumeration and sampling.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Seed for every randomized run.
    #[arg(long, global = true, default_value_t = repro::DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args, Debug, Clone)]
struct SeqInput {
    /// Sequence file (`group ...` and `seq ...` lines).
    #[arg(long)]
    seq: PathBuf,

    /// Expected group; must match the file's group line.
    #[arg(long)]
    group: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe a group.
    Group {
        #[arg(long)]
        group: String,
    },
    /// The products of a whole sequence over all orderings.
    Pi(SeqInput),
    /// Products of all length-n subsequences and their stabilizer.
    Subproducts {
        #[command(flatten)]
        input: SeqInput,
        #[arg(long)]
        n: usize,
    },
    /// Claim that no length-k subsequence is product-one.
    Check {
        #[command(flatten)]
        input: SeqInput,
        #[arg(long)]
        k: usize,
    },
    /// Check witness certificates against a sequence.
    VerifyWitness {
        #[command(flatten)]
        input: SeqInput,
        #[arg(long)]
        witness: PathBuf,
    },
    /// The Gao constant E(G) with its extremal certificates.
    Gao {
        #[arg(long)]
        group: String,
        /// Give up beyond this length.
        #[arg(long)]
        max_length: Option<usize>,
    },
    /// The small Davenport constant d(G) with its extremal certificates.
    Davenport {
        #[arg(long)]
        group: String,
        #[arg(long)]
        max_length: Option<usize>,
    },
    /// Classify free sequences of a length up to automorphism.
    Classify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        k: usize,
    },
    /// Match a sequence against the known extremal templates.
    Template(SeqInput),
    /// Lower bound on |Π_n(S)| via the subset stabilizer, or a random sweep.
    Dgm {
        #[arg(long)]
        seq: Option<PathBuf>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        fuzz: bool,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 30)]
        max_order: u32,
        #[arg(long, default_value_t = 20)]
        max_len: usize,
    },
    /// A product-one subsequence of length 6n2 in a family group.
    Witness {
        #[command(flatten)]
        input: SeqInput,
        /// Must equal 6n2 when given.
        #[arg(long)]
        k: Option<usize>,
    },
    /// The witness finder with its step log.
    Replay {
        #[command(flatten)]
        input: SeqInput,
        /// Print the step log.
        #[arg(long)]
        trace: bool,
        /// Stop after the constructive stages.
        #[arg(long)]
        no_fallback: bool,
    },
    /// Run a reproduction suite: cyclic, d6, main-theorem, dgm or all.
    Repro {
        #[arg(default_value = "all")]
        suite: String,
    },
}

struct Output<'a> {
    out: &'a mut dyn Write,
    records: bool,
}

impl Output<'_> {
    /// Prints the record in record mode and the prose otherwise.
    fn emit(&mut self, record: &str, human: &str) {
        let line = if self.records { record } else { human };
        let _ = writeln!(self.out, "{line}");
    }

    fn both(&mut self, line: &str) {
        let _ = writeln!(self.out, "{line}");
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ClaimViolation(_) => EXIT_CLAIM_FALSE,
        Error::InfeasibleSize { .. } | Error::LengthCapExceeded { .. } => EXIT_INFEASIBLE,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let mut o = Output {
        out,
        records: cli.common.records,
    };
    match dispatch(cli.command, &cli.common, &mut o, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))
}

fn load(input: &SeqInput) -> Result<Sequence, Error> {
    let s = text::parse_sequence_file(&read(&input.seq)?)?;
    if let Some(lit) = &input.group {
        let g = text::parse_group(lit)?;
        if g != *s.group() {
            return Err(Error::GroupMismatch {
                left: g.to_string(),
                right: s.group().to_string(),
            });
        }
    }
    Ok(s)
}

fn members_text(members: impl IntoIterator<Item = impl ToString>) -> String {
    members.into_iter().map(|u| u.to_string()).collect::<Vec<_>>().join(" ")
}

fn dispatch(cmd: Command, common: &Common, o: &mut Output, err: &mut dyn Write) -> Result<i32, Error> {
    let search = SearchConfig {
        budget: common.budget,
        ..SearchConfig::default()
    };
    let enum_opts = EnumOptions {
        jobs: common.jobs,
        search,
        ..EnumOptions::default()
    };
    match cmd {
        Command::Group { group } => {
            let g = text::parse_group(&group)?;
            let comm = g.commutator_subgroup();
            let mut rec = format!(
                "group=\"{g}\" order={} abelian={} commutator={}",
                g.order(),
                g.is_abelian(),
                comm.describe()
            );
            let mut human = format!(
                "{g}: order {}, {}, commutator subgroup {}",
                g.order(),
                if g.is_abelian() { "abelian" } else { "non-abelian" },
                comm.describe()
            );
            if let Ok(f) = g.factorize() {
                rec.push_str(&format!(" n1={} n2={} coprime={}", f.n1, f.n2, f.is_coprime()));
                human.push_str(&format!(", n = {} * {}", f.n1, f.n2));
            }
            let family = FamilyGroup::new(&g).is_ok();
            rec.push_str(&format!(" family={family}"));
            if family {
                human.push_str(", E(G) = 9n2 family member");
            }
            o.emit(&rec, &human);
            Ok(EXIT_OK)
        }
        Command::Pi(input) => {
            let s = load(&input)?;
            let pi = product::pi_set(&s, &search)?;
            o.emit(
                &format!("pi size={} members=\"{}\"", pi.len(), members_text(&pi)),
                &format!("π(S) has {} elements: {}", pi.len(), members_text(&pi)),
            );
            Ok(EXIT_OK)
        }
        Command::Subproducts { input, n } => {
            let s = load(&input)?;
            let p = product::subproducts(&s, n, &search)?;
            o.emit(
                &format!(
                    "subproducts n={n} size={} stabilizer={} members=\"{}\"",
                    p.members.len(),
                    p.stabilizer.describe(),
                    members_text(&p.members)
                ),
                &format!(
                    "Π_{n}(S) has {} elements, stabilizer {}: {}",
                    p.members.len(),
                    p.stabilizer.describe(),
                    members_text(&p.members)
                ),
            );
            Ok(EXIT_OK)
        }
        Command::Check { input, k } => {
            let s = load(&input)?;
            if k > s.len() {
                o.emit(&format!("check k={k} free=true"), &format!("free: |S| = {} < {k}", s.len()));
                return Ok(EXIT_OK);
            }
            match product::has_product_one(&s, k, &search)? {
                None => {
                    o.emit(
                        &format!("check k={k} free=true"),
                        &format!("free: no product-one subsequence of length {k}"),
                    );
                    Ok(EXIT_OK)
                }
                Some(w) => {
                    o.emit(
                        &format!("check k={k} free=false"),
                        &format!("not free: product-one subsequence of length {k} found"),
                    );
                    o.both(&w.to_line());
                    Ok(EXIT_CLAIM_FALSE)
                }
            }
        }
        Command::VerifyWitness { input, witness } => {
            let s = load(&input)?;
            let body = read(&witness)?;
            let mut total = 0;
            let mut bad = 0;
            for (i, line) in body.lines().enumerate() {
                let trimmed = line.split('#').next().unwrap_or("").trim();
                if trimmed.is_empty() {
                    continue;
                }
                let w = text::parse_witness_line(s.group(), trimmed).map_err(|e| match e {
                    Error::Parse { column, message, .. } => Error::Parse {
                        line: i + 1,
                        column,
                        message,
                    },
                    other => other,
                })?;
                total += 1;
                match verify_witness_line(&s, &w) {
                    Ok(()) => o.emit(&format!("witness line={} valid=true", i + 1), &format!("line {}: valid", i + 1)),
                    Err(why) => {
                        bad += 1;
                        o.emit(
                            &format!("witness line={} valid=false reason={}", i + 1, why.code()),
                            &format!("line {}: rejected ({why})", i + 1),
                        );
                    }
                }
            }
            if total == 0 {
                return Err(Error::Precondition("no witness lines".into()));
            }
            Ok(if bad == 0 { EXIT_OK } else { EXIT_CLAIM_FALSE })
        }
        Command::Gao { group, max_length } => {
            let g = text::parse_group(&group)?;
            let r = invariants::gao_constant(&g, max_length.unwrap_or(4 * g.order()), &enum_opts)?;
            constant_report(o, &r);
            Ok(EXIT_OK)
        }
        Command::Davenport { group, max_length } => {
            let g = text::parse_group(&group)?;
            let r = invariants::davenport_constant(&g, max_length.unwrap_or(2 * g.order()), &enum_opts)?;
            constant_report(o, &r);
            Ok(EXIT_OK)
        }
        Command::Classify { group, length, k } => {
            let g = text::parse_group(&group)?;
            let c = invariants::classify_extremal(&g, length, k, &enum_opts)?;
            for line in c.records() {
                o.both(&line);
            }
            let ok = c.unmatched.is_empty() && c.families.iter().all(|f| f.complete);
            Ok(if ok { EXIT_OK } else { EXIT_CLAIM_FALSE })
        }
        Command::Template(input) => {
            let s = load(&input)?;
            match check_template(&s) {
                Some(m) => {
                    o.emit(&format!("template match=true {m}"), &format!("matches {m}"));
                    Ok(EXIT_OK)
                }
                None => {
                    o.emit("template match=false", "matches no known template");
                    Ok(EXIT_CLAIM_FALSE)
                }
            }
        }
        Command::Dgm {
            seq,
            group,
            n,
            fuzz,
            trials,
            max_order,
            max_len,
        } => {
            if fuzz {
                let r = additive::fuzz(trials, max_order, max_len, common.seed, common.jobs)?;
                o.both(&r.to_string());
                for v in &r.violations {
                    o.both(&format!("violation {}", v.record()));
                    o.both(&v.sequence.to_string());
                }
                return Ok(if r.violations.is_empty() { EXIT_OK } else { EXIT_CLAIM_FALSE });
            }
            let (Some(seq), Some(n)) = (seq, n) else {
                return Err(Error::Precondition("dgm needs --seq and --n, or --fuzz".into()));
            };
            let s = load(&SeqInput { seq, group })?;
            let r = additive::dgm_check(&s, n, &search)?;
            o.emit(
                &r.record(),
                &format!(
                    "|Π_{n}(S)| = {} vs bound {} with stabilizer {} (order {}): {}",
                    r.lhs,
                    r.rhs,
                    r.stabilizer.describe(),
                    r.stabilizer.order(),
                    if r.holds { "holds" } else { "VIOLATED" }
                ),
            );
            Ok(if r.holds { EXIT_OK } else { EXIT_CLAIM_FALSE })
        }
        Command::Witness { input, k } => {
            let s = load(&input)?;
            let fam = FamilyGroup::new(s.group())?;
            if let Some(k) = k {
                if k != fam.k() {
                    return Err(Error::Precondition(format!("k must be 6n2 = {} for this group", fam.k())));
                }
            }
            let opts = PipelineOptions {
                search,
                ..PipelineOptions::default()
            };
            big_witness(o, &fam, &s, &opts, false)
        }
        Command::Replay {
            input,
            trace,
            no_fallback,
        } => {
            let s = load(&input)?;
            let fam = FamilyGroup::new(s.group())?;
            let opts = PipelineOptions {
                search,
                exact_fallback: !no_fallback,
                ..PipelineOptions::default()
            };
            big_witness(o, &fam, &s, &opts, trace)
        }
        Command::Repro { suite } => {
            let suite: Suite = suite.parse()?;
            let cfg = ReproConfig {
                seed: common.seed,
                jobs: common.jobs,
            };
            let mut all = true;
            for &id in suite.criteria() {
                let r = repro::run_criterion(id, &cfg)?;
                all &= r.pass;
                o.both(&r.record());
                let _ = writeln!(err, "criterion={} elapsed_ms={}", r.id, r.elapsed.as_millis());
            }
            Ok(if all { EXIT_OK } else { EXIT_CLAIM_FALSE })
        }
    }
}

fn constant_report(o: &mut Output, r: &invariants::ConstantReport) {
    let lines = r.records();
    o.emit(
        &lines[0],
        &format!(
            "{}({}) = {} with {} extremal sequences",
            if r.kind == invariants::ConstantKind::Gao { "E" } else { "d" },
            r.group,
            r.value,
            r.certificates.len()
        ),
    );
    for l in &lines[1..] {
        o.both(l);
    }
}

fn big_witness(
    o: &mut Output,
    fam: &FamilyGroup,
    s: &Sequence,
    opts: &PipelineOptions,
    trace: bool,
) -> Result<i32, Error> {
    let outcome = search_big_product_one(fam, s, opts)?;
    let steps = match &outcome {
        SearchOutcome::Witness(w) => &w.trace,
        SearchOutcome::Free { trace, .. } | SearchOutcome::Undecided { trace } => trace,
    };
    if trace {
        for step in steps {
            o.both(&format!("trace {step}"));
        }
    }
    match outcome {
        SearchOutcome::Witness(w) => {
            o.emit(
                &format!("result=witness k={} rung={}", w.witness.len(), w.rung),
                &format!("product-one subsequence of length {} (stage: {})", w.witness.len(), w.rung),
            );
            o.both(&w.witness.to_line());
            Ok(EXIT_OK)
        }
        SearchOutcome::Free { template, .. } => {
            let t = template.map_or("none".to_string(), |m| m.to_string());
            o.emit(
                &format!("result=free k={} template_match={t}", fam.k()),
                &format!("no product-one subsequence of length {} (template: {t})", fam.k()),
            );
            Ok(EXIT_CLAIM_FALSE)
        }
        SearchOutcome::Undecided { .. } => {
            o.emit("result=undecided", "constructive stages found nothing; rerun without --no-fallback");
            Ok(EXIT_CLAIM_FALSE)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn gao_d6() {
        let (code, out, _) = run_str(&["zerosum", "gao", "--group", "metacyclic n=3 s=2", "--records"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("constant=gao group=\"metacyclic n=3 s=2\" value=9 extremal_count=19\n"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&["zerosum"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["zerosum", "group", "--group", "cyclic n=0"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["zerosum", "repro", "bogus"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["zerosum", "--help"]).0, EXIT_OK);
    }

    #[test]
    fn infeasible_enumeration() {
        let (code, _, err) = run_str(&["zerosum", "gao", "--group", "metacyclic n=15 s=11"]);
        assert_eq!(code, EXIT_INFEASIBLE, "{err}");
    }

    #[test]
    fn group_description() {
        let (code, out, _) = run_str(&["zerosum", "group", "--group", "metacyclic n=15 s=11", "--records"]);
        assert_eq!(code, 0);
        assert!(out.contains("order=30") && out.contains("n1=3 n2=5") && out.contains("family=true"), "{out}");
    }
}
