use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use shiftlab::arre_invert::{self, Inversion, ROutcome};
use shiftlab::biseq::format_word;
use shiftlab::degree::{self, SumWindowBarrier};
use shiftlab::examples;
use shiftlab::lemma::{self, Family, Niceness};
use shiftlab::morphism::{FullImage, LocalRule, Rule, WindowedRule};
use shiftlab::shiftspace::{Side, DEFAULT_NMAX};
use shiftlab::{cantor_distance, BiSeq, Distance, Morphism, ShiftSpaceSpec, Symbol, Tail};

#[derive(Parser)]
#[command(
    name = "shiftlab",
    version,
    about = "Shift spaces, block codes and chain inversion"
)]
struct Cli {
    /// One JSON record per line instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized subcommand.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sequence evaluation and metric.
    #[command(subcommand)]
    Seq(SeqCmd),
    /// Morphism evaluation.
    #[command(subcommand)]
    Morph(MorphCmd),
    /// Finite-degree counting.
    #[command(subcommand)]
    Degree(DegreeCmd),
    /// Limit-cylinder construction for a family of points.
    #[command(subcommand)]
    Lemma(LemmaCmd),
    /// The chain w_i + 2 w_{i+1} = y_i and its inverse map.
    #[command(subcommand)]
    Arre(ArreCmd),
    /// Block languages of shift spaces.
    #[command(subcommand)]
    Lang(LangCmd),
    /// Worked examples.
    #[command(subcommand)]
    Examples(ExamplesCmd),
}

#[derive(Subcommand)]
enum SeqCmd {
    /// Symbols at one coordinate or over a window.
    Eval {
        #[arg(long)]
        seq: String,
        #[arg(long, conflicts_with = "window", allow_hyphen_values = true)]
        at: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Distance 2^-k between two sequences.
    Dist {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Shift a sequence by k.
    Shift {
        #[arg(long)]
        seq: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        by: i64,
    },
}

#[derive(Subcommand)]
enum MorphCmd {
    /// Apply a rule over a window, or to the whole sequence when possible.
    Apply {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        seq: String,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Check shift commutation on random inputs.
    CommuteCheck {
        #[arg(long)]
        rule: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Rewrite a windowed rule with a wider window.
    Widen {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        memory: usize,
        #[arg(long)]
        anticipation: usize,
    },
}

#[derive(Subcommand)]
enum DegreeCmd {
    /// Count cells carrying a value on a grid of (s, d) bounds.
    Probe {
        #[arg(long)]
        rule: String,
        #[arg(long, allow_hyphen_values = true)]
        value: Symbol,
        /// `s:d` pairs, comma separated.
        #[arg(long)]
        grid: String,
        /// For sum-window: use barrier b0 or b1 instead of the minimal cells.
        #[arg(long)]
        barrier: Option<String>,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// `no-image`, `zero-drift:<n>[,spread]` or `constant:<seq>`.
    #[arg(long)]
    family: String,
    #[arg(long)]
    rule: String,
    #[arg(long, default_value_t = 6)]
    levels: usize,
    #[arg(long, default_value_t = 16)]
    kmax: u64,
}

#[derive(Subcommand)]
enum LemmaCmd {
    /// Print the nested limit cylinders h_l.
    Trace(FamilyArgs),
    /// Classify the limit domain.
    Classify(FamilyArgs),
    /// Check whether the family is nice.
    Nice {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 3)]
        window: i64,
        #[arg(long, default_value_t = 20)]
        kmax: u64,
    },
}

#[derive(Args)]
struct NmaxArg {
    #[arg(long, env = "SHIFTLAB_NMAX_DEFAULT", default_value_t = DEFAULT_NMAX)]
    nmax: usize,
}

#[derive(Subcommand)]
enum ArreCmd {
    /// Solutions on an explicit window `y_{-N},…,y_N`, or on `--seq` at `--n`.
    Solve {
        #[arg(long, conflicts_with_all = ["seq", "n"])]
        window: Option<String>,
        #[arg(long, requires = "n")]
        seq: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Stabilization index r of the solution sets.
    R {
        #[arg(long)]
        seq: String,
        #[command(flatten)]
        nmax: NmaxArg,
    },
    /// Preimage of y, or why there is none.
    Invert {
        #[arg(long)]
        seq: String,
        #[command(flatten)]
        nmax: NmaxArg,
    },
    /// The cylinder h^y on [-r, r].
    Barrier {
        #[arg(long)]
        seq: String,
        #[command(flatten)]
        nmax: NmaxArg,
    },
    /// Cell counts showing the inverse has no finite-degree barrier.
    Witness {
        #[arg(long, default_value_t = 6)]
        bound: i64,
        #[command(flatten)]
        nmax: NmaxArg,
    },
}

#[derive(Subcommand)]
enum LangCmd {
    /// Allowed blocks of a given length.
    Blocks {
        #[arg(long)]
        space: String,
        #[arg(long)]
        len: usize,
        #[arg(long, default_value_t = 3)]
        bound: Symbol,
    },
    /// Symbols that may follow a given symbol.
    Followers {
        #[arg(long)]
        space: String,
        #[arg(long, allow_hyphen_values = true)]
        symbol: Symbol,
        #[arg(long, default_value_t = 8)]
        bound: Symbol,
        /// List predecessors instead.
        #[arg(long)]
        predecessors: bool,
    },
    /// Whether the space has finitely many points.
    Finiteness {
        #[arg(long)]
        space: String,
        #[arg(long, default_value = "bilateral")]
        side: String,
        #[arg(long, default_value_t = 4)]
        bound: Symbol,
    },
}

#[derive(Subcommand)]
enum ExamplesCmd {
    /// List example ids.
    List,
    /// Run one example, or all of them.
    Run {
        /// Example id; omit with `--all`.
        id: Option<String>,
        #[arg(long, conflicts_with = "id")]
        all: bool,
    },
}

enum Failure {
    Usage(String),
    Assertion(String),
}

fn usage<E: Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

type Outcome = Result<(), Failure>;

struct Out {
    json: bool,
}

impl Out {
    fn emit(&self, text: impl Display, record: Value) {
        if self.json {
            println!("{record}");
        } else {
            println!("{text}");
        }
    }
}

fn parse_seq(s: &str) -> Result<BiSeq, Failure> {
    s.parse().map_err(usage)
}

fn parse_interval(s: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Usage(format!("expected `a,b`, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let (a, b) = (
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    );
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn parse_rule(name: &str) -> Result<Morphism, Failure> {
    if let Some(path) = name.strip_prefix("windowed:") {
        let text = std::fs::read_to_string(PathBuf::from(path))
            .map_err(|e| usage(format!("{path}: {e}")))?;
        return Ok(Morphism::windowed(
            WindowedRule::parse_table(&text).map_err(usage)?,
        ));
    }
    Morphism::named(name).map_err(|_| {
        Failure::Usage(format!(
            "unknown rule `{name}`; expected arre, sum-window, two-point, zero-locator or windowed:<file>"
        ))
    })
}

fn parse_family(s: &str) -> Result<Family, Failure> {
    if s == "no-image" {
        return Ok(Family::NoImage);
    }
    if let Some(x) = s.strip_prefix("constant:") {
        return Ok(Family::Constant(parse_seq(x)?));
    }
    if let Some(body) = s.strip_prefix("zero-drift:") {
        let (n, spread) = match body.split_once(',') {
            Some((n, "spread")) => (n, true),
            None => (body, false),
            _ => return Err(Failure::Usage(format!("bad family `{s}`"))),
        };
        let zero_at = n
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("bad family `{s}`")))?;
        return Ok(Family::ZeroDrift { zero_at, spread });
    }
    Err(Failure::Usage(format!(
        "unknown family `{s}`; expected no-image, zero-drift:<n>[,spread] or constant:<seq>"
    )))
}

fn words(w: &[Symbol]) -> String {
    w.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn distance_json(d: Distance) -> Value {
    match d {
        Distance::Zero => json!({"zero": true}),
        Distance::Pow2Neg(k) => json!({"zero": false, "exponent": k}),
    }
}

/// A random input for the rule: an injective point with one zero for the
/// zero-locator, small symbols drawn from the table alphabet otherwise.
fn sample_input(rng: &mut ChaCha8Rng, psi: &Morphism) -> BiSeq {
    if let Rule::Windowed(_) = &psi.rule {
        if let shiftlab::AlphabetSpec::Finite(symbols) = &psi.input.alphabet {
            let pick = |rng: &mut ChaCha8Rng| symbols[rng.gen_range(0..symbols.len())];
            let len = rng.gen_range(0..=8);
            let center = (0..len).map(|_| pick(rng)).collect();
            return BiSeq::new(
                Tail::Constant(pick(rng)),
                rng.gen_range(-6..=2),
                center,
                Tail::Constant(pick(rng)),
            );
        }
    }
    if psi.name() == "zero-locator" {
        let l = 2 * rng.gen_range(1..=5) + 1;
        let r = 2 * rng.gen_range(1..=5);
        return BiSeq::new(
            Tail::arithmetic(l, 2),
            rng.gen_range(-6..=6),
            vec![0],
            Tail::arithmetic(r, 2),
        );
    }
    let tail = |rng: &mut ChaCha8Rng| match rng.gen_range(0..2) {
        0 => Tail::Constant(rng.gen_range(0..=4)),
        _ => Tail::periodic(
            (0..rng.gen_range(1..=3))
                .map(|_| rng.gen_range(0..=4))
                .collect(),
        )
        .expect("nonempty"),
    };
    let left = tail(rng);
    let right = tail(rng);
    let len = rng.gen_range(0..=8);
    let center = (0..len).map(|_| rng.gen_range(0..=4)).collect();
    BiSeq::new(left, rng.gen_range(-6..=2), center, right)
}

fn run_seq(cmd: SeqCmd, out: &Out) -> Outcome {
    match cmd {
        SeqCmd::Eval { seq, at, window } => {
            let x = parse_seq(&seq)?;
            match (at, window) {
                (Some(n), None) => {
                    let s = x.symbol_at(n);
                    out.emit(s, json!({"at": n, "symbol": s}));
                }
                (None, Some(w)) => {
                    let (a, b) = parse_interval(&w)?;
                    let w = x.restrict(a, b).map_err(usage)?;
                    out.emit(words(&w), json!({"window": [a, b], "symbols": w}));
                }
                _ => {
                    return Err(Failure::Usage(
                        "give exactly one of --at or --window".into(),
                    ))
                }
            }
        }
        SeqCmd::Dist { x, y } => {
            let d = cantor_distance(&parse_seq(&x)?, &parse_seq(&y)?);
            out.emit(d, distance_json(d));
        }
        SeqCmd::Shift { seq, by } => {
            let y = parse_seq(&seq)?.shift(by);
            out.emit(&y, json!({"by": by, "seq": y.to_string()}));
        }
    }
    Ok(())
}

fn run_morph(cmd: MorphCmd, out: &Out, seed: u64) -> Outcome {
    match cmd {
        MorphCmd::Apply { rule, seq, window } => {
            let psi = parse_rule(&rule)?;
            let x = parse_seq(&seq)?;
            match window {
                Some(w) => {
                    let (a, b) = parse_interval(&w)?;
                    let y = psi.eval_window(&x, a, b).map_err(usage)?;
                    out.emit(
                        words(&y),
                        json!({"rule": psi.name(), "window": [a, b], "symbols": y}),
                    );
                }
                None => match psi.eval_full(&x).map_err(usage)? {
                    FullImage::Full(y) => {
                        out.emit(&y, json!({"rule": psi.name(), "seq": y.to_string()}))
                    }
                    FullImage::WindowOnly => {
                        return Err(Failure::Usage(
                            "image tails are not representable; pass --window".into(),
                        ))
                    }
                },
            }
        }
        MorphCmd::CommuteCheck { rule, samples } => {
            let psi = parse_rule(&rule)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut violations = Vec::new();
            for _ in 0..samples {
                let x = sample_input(&mut rng, &psi);
                let k = rng.gen_range(-10..=10);
                let a = rng.gen_range(-20..=20);
                let b = rng.gen_range(a..=20);
                if !psi.check_shift_commuting(&x, k, a, b).map_err(usage)? {
                    violations.push(format!("x={x} k={k} window=[{a},{b}]"));
                }
            }
            for v in &violations {
                out.emit(format!("violation {v}"), json!({"violation": v}));
            }
            out.emit(
                format!(
                    "rule={} checked={samples} violations={}",
                    psi.name(),
                    violations.len()
                ),
                json!({"rule": psi.name(), "checked": samples, "violations": violations.len()}),
            );
            if !violations.is_empty() {
                return Err(Failure::Assertion("shift-commuting violated".into()));
            }
        }
        MorphCmd::Widen {
            rule,
            memory,
            anticipation,
        } => {
            let psi = parse_rule(&rule)?;
            let Rule::Windowed(r) = &psi.rule else {
                return Err(Failure::Usage(format!(
                    "`{}` is not a windowed rule",
                    psi.name()
                )));
            };
            let wide = r.widen(memory, anticipation).map_err(usage)?;
            let header = format!(
                "# memory={} anticipation={}",
                wide.memory(),
                wide.anticipation()
            );
            match wide.local() {
                LocalRule::Linear(c) => {
                    let offsets: Vec<i64> = wide.core_offsets().collect();
                    out.emit(
                        format!("{header}\nlinear coefficients={} core_offsets={:?}", format_word(c), offsets),
                        json!({"memory": wide.memory(), "anticipation": wide.anticipation(), "coefficients": c, "core_offsets": offsets}),
                    );
                }
                LocalRule::Table(t) => {
                    let mut text = header.clone();
                    for (w, v) in t {
                        text.push_str(&format!("\n{} -> {v}", format_word(w)));
                    }
                    let entries: Vec<Value> = t
                        .iter()
                        .map(|(w, v)| json!({"core": w, "value": v}))
                        .collect();
                    out.emit(
                        text,
                        json!({"memory": wide.memory(), "anticipation": wide.anticipation(), "table": entries}),
                    );
                }
            }
        }
    }
    Ok(())
}

fn parse_grid(s: &str) -> Result<Vec<(Symbol, i64)>, Failure> {
    s.split(',')
        .map(|p| {
            let (a, b) = p
                .split_once(':')
                .ok_or_else(|| Failure::Usage(format!("grid point `{p}` is not `s:d`")))?;
            let a = a
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("bad grid point `{p}`")))?;
            let b = b
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("bad grid point `{p}`")))?;
            Ok((a, b))
        })
        .collect()
}

fn run_degree(cmd: DegreeCmd, out: &Out) -> Outcome {
    let DegreeCmd::Probe {
        rule,
        value,
        grid,
        barrier,
    } = cmd;
    let psi = parse_rule(&rule)?;
    let grid = parse_grid(&grid)?;
    let report = match barrier.as_deref() {
        None => degree::degree_probe(&psi, value, &grid),
        Some(b) if psi.name() == "sum-window" => {
            let which = match b {
                "b0" => SumWindowBarrier::B0,
                "b1" => SumWindowBarrier::B1,
                other => {
                    return Err(Failure::Usage(format!(
                        "unknown barrier `{other}`; expected b0 or b1"
                    )))
                }
            };
            which.probe(value, &grid)
        }
        Some(_) => {
            return Err(Failure::Usage(
                "--barrier applies to sum-window only".into(),
            ))
        }
    }
    .map_err(usage)?;
    if out.json {
        for p in &report.points {
            out.emit(
                "",
                json!({
                    "value": report.value,
                    "symbol_bound": p.symbol_bound,
                    "domain_bound": p.domain_bound,
                    "count": p.count.to_string(),
                    "complete": p.complete,
                    "verdict": report.verdict.to_string(),
                }),
            );
        }
    } else {
        out.emit(&report, Value::Null);
    }
    Ok(())
}

fn run_lemma(cmd: LemmaCmd, out: &Out) -> Outcome {
    match cmd {
        LemmaCmd::Trace(a) => {
            let (fam, psi) = (parse_family(&a.family)?, parse_rule(&a.rule)?);
            let trace = lemma::build_trace(&fam, &psi, &psi, a.levels, a.kmax).map_err(usage)?;
            if out.json {
                for l in &trace.levels {
                    out.emit(
                        "",
                        json!({"ell": l.ell, "h": l.h.to_string(), "S": l.s.to_string(), "y": l.target}),
                    );
                }
            } else {
                out.emit(&trace, Value::Null);
            }
        }
        LemmaCmd::Classify(a) => {
            let (fam, psi) = (parse_family(&a.family)?, parse_rule(&a.rule)?);
            let trace = lemma::build_trace(&fam, &psi, &psi, a.levels, a.kmax).map_err(usage)?;
            let obs = lemma::classify(&trace);
            let pre = lemma::exhibit_preimage(&trace, &fam, &psi).map_err(usage)?;
            let pre_text = pre.as_ref().map(|x| x.to_string());
            out.emit(
                format!("{obs}\npreimage={}", pre_text.as_deref().unwrap_or("none")),
                json!({
                    "class": obs.class.to_string(),
                    "tag": obs.tag.to_string(),
                    "window": [obs.window.0, obs.window.1],
                    "h": obs.truncated.to_string(),
                    "preimage": pre_text,
                }),
            );
        }
        LemmaCmd::Nice {
            family,
            window,
            kmax,
        } => {
            let fam = parse_family(&family)?;
            let n = lemma::nice_check(&fam, window, kmax);
            let record = match &n {
                Niceness::NiceWitness { limit, tag } => {
                    json!({"verdict": "nice-witness", "limit": limit.to_string(), "tag": tag.to_string()})
                }
                Niceness::NotNiceWitness(why) => {
                    json!({"verdict": "not-nice-witness", "reason": why})
                }
                Niceness::Inconclusive => json!({"verdict": "inconclusive"}),
            };
            out.emit(&n, record);
        }
    }
    Ok(())
}

fn run_arre(cmd: ArreCmd, out: &Out) -> Outcome {
    match cmd {
        ArreCmd::Solve { window, seq, n } => {
            let set = match (window, seq, n) {
                (Some(w), None, None) => {
                    let w = shiftlab::biseq::parse_word(&w).map_err(usage)?;
                    arre_invert::solve_chain(&w).map_err(usage)?
                }
                (None, Some(s), Some(n)) => {
                    arre_invert::solution_set(&parse_seq(&s)?, n).map_err(usage)?
                }
                _ => return Err(Failure::Usage("give --window, or --seq with --n".into())),
            };
            let c = set.center_index();
            for w in &set.words {
                out.emit(format_word(w), json!({"n": set.n, "word": w, "w0": w[c]}));
            }
            out.emit(
                format!("count={}", set.len()),
                json!({"n": set.n, "count": set.len()}),
            );
        }
        ArreCmd::R { seq, nmax } => {
            let y = parse_seq(&seq)?;
            let (text, record) = match arre_invert::compute_r(&y, nmax.nmax).map_err(usage)? {
                ROutcome::Found(r) => (format!("r={r}"), json!({"r": r})),
                ROutcome::Empty { at } => (format!("empty at={at}"), json!({"empty_at": at})),
                ROutcome::Exhausted { n_max } => (
                    format!("exhausted nmax={n_max}"),
                    json!({"exhausted": n_max}),
                ),
            };
            out.emit(text, record);
        }
        ArreCmd::Invert { seq, nmax } => {
            let y = parse_seq(&seq)?;
            match arre_invert::invert(&y, nmax.nmax).map_err(usage)? {
                Inversion::Preimage(x) => out.emit(&x, json!({"preimage": x.to_string()})),
                Inversion::NotInImage(why) => {
                    out.emit("NOT-IN-IMAGE", json!({"preimage": null, "reason": why}))
                }
                Inversion::Inconclusive { n_max } => out.emit(
                    format!("INCONCLUSIVE nmax={n_max}"),
                    json!({"preimage": null, "inconclusive": n_max}),
                ),
            }
        }
        ArreCmd::Barrier { seq, nmax } => {
            let y = parse_seq(&seq)?;
            let h = arre_invert::barrier_h_y(&y, nmax.nmax).map_err(usage)?;
            let v = arre_invert::phi0(&y, nmax.nmax).map_err(usage)?;
            out.emit(
                format!("h={h} phi0={v}"),
                json!({"h": h.to_string(), "phi0": v}),
            );
        }
        ArreCmd::Witness { bound, nmax } => {
            let rep =
                arre_invert::phi_not_finite_degree_witness(bound, nmax.nmax).map_err(usage)?;
            if out.json {
                for (j, v) in &rep.family {
                    out.emit("", json!({"j": j, "phi0": v}));
                }
                for r in &rep.rows {
                    out.emit("", json!({"bound": r.bound, "witnesses": r.count}));
                }
                out.emit("", json!({"ok": rep.ok}));
            } else {
                out.emit(&rep, Value::Null);
            }
            if !rep.ok {
                return Err(Failure::Assertion("witness family failed".into()));
            }
        }
    }
    Ok(())
}

fn run_lang(cmd: LangCmd, out: &Out) -> Outcome {
    match cmd {
        LangCmd::Blocks { space, len, bound } => {
            let x: ShiftSpaceSpec = space.parse().map_err(usage)?;
            let blocks = x.allowed_blocks(len, bound).map_err(usage)?;
            for b in &blocks {
                out.emit(format_word(b), json!({"block": b}));
            }
            out.emit(
                format!("count={}", blocks.len()),
                json!({"count": blocks.len()}),
            );
        }
        LangCmd::Followers {
            space,
            symbol,
            bound,
            predecessors,
        } => {
            let x: ShiftSpaceSpec = space.parse().map_err(usage)?;
            let set = if predecessors {
                x.predecessor_set(symbol, bound)
            } else {
                x.follower_set(symbol, bound)
            }
            .map_err(usage)?;
            let list: Vec<Symbol> = set.symbols.iter().copied().collect();
            out.emit(
                format!("{} exhaustive={}", format_word(&list), set.exhaustive),
                json!({"symbol": symbol, "predecessors": predecessors, "symbols": list, "exhaustive": set.exhaustive}),
            );
        }
        LangCmd::Finiteness { space, side, bound } => {
            let x: ShiftSpaceSpec = space.parse().map_err(usage)?;
            let side: Side = side.parse().map_err(usage)?;
            let rep = x.finiteness_probe(side, bound).map_err(usage)?;
            if out.json {
                for p in &rep.probes {
                    out.emit(
                        "",
                        json!({"symbol": p.symbol, "side": p.side.to_string(), "count": p.count,
                               "count_wide": p.count_wide, "exhaustive": p.exhaustive}),
                    );
                }
                out.emit("", json!({"verdict": rep.verdict.to_string()}));
            } else {
                out.emit(&rep, Value::Null);
            }
        }
    }
    Ok(())
}

fn run_examples(cmd: ExamplesCmd, out: &Out) -> Outcome {
    match cmd {
        ExamplesCmd::List => {
            for case in examples::registry() {
                out.emit(
                    format!("{}\t{}", case.id, case.title),
                    json!({"id": case.id, "title": case.title}),
                );
            }
        }
        ExamplesCmd::Run { id, all } => {
            let reports = match (id, all) {
                (Some(id), false) => vec![examples::run_example(&id).map_err(usage)?],
                (None, true) => examples::registry().iter().map(|c| c.run()).collect(),
                _ => return Err(Failure::Usage("give an example id or --all".into())),
            };
            let mut failed = Vec::new();
            for r in &reports {
                if out.json {
                    for e in &r.expectations {
                        out.emit(
                            "",
                            json!({"example": r.id, "check": e.description, "passed": e.passed,
                                   "evidence": e.evidence.to_string(), "detail": e.detail}),
                        );
                    }
                    out.emit(
                        "",
                        json!({"example": r.id, "passed": r.passed(), "notes": r.notes}),
                    );
                } else {
                    out.emit(r, Value::Null);
                }
                if !r.passed() {
                    failed.push(r.id);
                }
            }
            if !failed.is_empty() {
                return Err(Failure::Assertion(format!("failed: {}", failed.join(", "))));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = Out { json: cli.json };
    let result = match cli.command {
        Command::Seq(c) => run_seq(c, &out),
        Command::Morph(c) => run_morph(c, &out, cli.seed),
        Command::Degree(c) => run_degree(c, &out),
        Command::Lemma(c) => run_lemma(c, &out),
        Command::Arre(c) => run_arre(c, &out),
        Command::Lang(c) => run_lang(c, &out),
        Command::Examples(c) => run_examples(c, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("usage: shiftlab [--json] [--seed N] <seq|morph|degree|lemma|arre|lang|examples> ...");
            ExitCode::from(2)
        }
    }
}
