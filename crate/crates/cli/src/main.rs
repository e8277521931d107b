use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use evpos_core::classify::{
    classify_with, necessity_witness, ClassificationVerdict, ClassifyOptions, NecessityWitness,
    VerdictStatus, SCHEMA_VERSION,
};
use evpos_core::covering::covering_report;
use evpos_core::partitions::{coefficient_via_partitions, compression_check};
use evpos_core::powers::{coefficient_by_convolution, profile, sign_profile_csv, threshold_search};
use evpos_core::saddle::estimate_coefficient;
use evpos_core::strongpos::{certify_with, CertifyOptions, Status};
use evpos_core::{corpus, parse, Error, SparsePolynomial};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "evpos",
    version,
    about = "Decide eventual non-negativity of real polynomials"
)]
struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct Budgets {
    /// Subdivision depth limit for the strong-positivity certifier.
    #[arg(long)]
    depth: Option<u32>,
    /// Box limit for the strong-positivity certifier.
    #[arg(long)]
    max_boxes: Option<u64>,
    /// Sample budget for the refutation search.
    #[arg(long)]
    refute: Option<usize>,
}

impl Budgets {
    fn options(&self) -> CertifyOptions {
        let mut opts = CertifyOptions::default();
        if let Some(d) = self.depth {
            opts.depth_budget = d;
        }
        if let Some(b) = self.max_boxes {
            opts.max_boxes = b;
        }
        if let Some(r) = self.refute {
            opts.refute_budget = r;
        }
        opts
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full decision procedure.
    Classify {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// Attach an empirical threshold search up to this power.
        #[arg(long)]
        m_max: Option<u64>,
        /// Attach the exact verification transcript for negative verdicts.
        #[arg(long)]
        transcript: bool,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Positive covering report.
    Covering {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Strong positivity certificate or witness.
    Strongpos {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Exact coefficients of f^m.
    Power {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        m: u64,
    },
    /// Empirical threshold m0 with f^m >= 0 on [m0, m_max].
    Threshold {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 150)]
        m_max: u64,
    },
    /// Saddle-point estimate of [z^n] f^m.
    Saddle {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
    },
    /// Partition-sum coefficient, optionally with the compression check up to n.
    Partitions {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        compression: bool,
    },
    /// CSV sign table of f^m for m in [m_min, m_max].
    SignProfile {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 1)]
        m_min: u64,
        #[arg(long, default_value_t = 40)]
        m_max: u64,
    },
    /// Classify a seeded random corpus.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_degree: u64,
        #[command(flatten)]
        budgets: Budgets,
    },
}

struct Report {
    body: String,
    inconclusive: bool,
}

impl Report {
    fn done(body: String) -> Self {
        Self {
            body,
            inconclusive: false,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: &'static str,
    command: &'static str,
    input: &'a str,
    #[serde(flatten)]
    report: T,
}

fn envelope<T: Serialize>(command: &'static str, input: &str, report: T) -> anyhow::Result<String> {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        input,
        report,
    };
    Ok(serde_json::to_string_pretty(&env)? + "\n")
}

fn parse_poly(text: &str) -> anyhow::Result<SparsePolynomial> {
    parse::parse(text).map_err(|e| match e {
        Error::Parse { position, .. } => {
            anyhow::anyhow!(
                "{e}\n  {text}\n  {}^",
                " ".repeat(text[..position.min(text.len())].chars().count())
            )
        }
        other => other.into(),
    })
}

fn no_csv(command: &str) -> anyhow::Result<Report> {
    bail!("csv output is not available for `{command}`")
}

fn status_name(s: VerdictStatus) -> &'static str {
    match s {
        VerdictStatus::EventuallyNonNegative => "EventuallyNonNegative",
        VerdictStatus::NotEventuallyNonNegative => "NotEventuallyNonNegative",
        VerdictStatus::Inconclusive => "Inconclusive",
    }
}

fn witness_kind(w: Option<&NecessityWitness>) -> &'static str {
    match w {
        None => "",
        Some(NecessityWitness::CoveringFailure { .. }) => "CoveringFailure",
        Some(NecessityWitness::StrongPositivityFailure { .. }) => "StrongPositivityFailure",
        Some(NecessityWitness::SignFailure { .. }) => "SignFailure",
    }
}

fn describe_witness(w: &NecessityWitness) -> String {
    match w {
        NecessityWitness::CoveringFailure {
            side,
            k,
            index,
            b0,
            bk,
        } => format!(
            "covering failure ({side:?}) at k={k}: [z^({}m{:+})] f^m = m*({b0})^(m-1)*({bk}) < 0",
            index.slope, index.offset
        ),
        NecessityWitness::StrongPositivityFailure { witness } => format!(
            "|g(z)| > g(|z|) at z = {:.12} {:+.12}i (|g(z)| = {:.6e}, g(|z|) = {:.6e})",
            witness.z_re, witness.z_im, witness.abs_f_z, witness.f_abs_z
        ),
        NecessityWitness::SignFailure {
            side,
            coefficient,
            index,
        } => format!(
            "negative {side:?} coefficient {coefficient}: sign of [z^({}m{:+})] f^m alternates",
            index.slope, index.offset
        ),
    }
}

fn classify_text(v: &ClassificationVerdict) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "status: {}", status_name(v.status));
    let _ = writeln!(s, "core: f = z^{} g(z^{}), g = {}", v.k, v.l, v.core);
    if let Some(c) = &v.covering {
        let _ = writeln!(
            s,
            "covering: forward {}, reverse {}, uncovered {:?}",
            c.one_sided_forward, c.one_sided_reverse, c.uncovered_indices
        );
    }
    if let Some(sp) = &v.strong_positivity {
        let _ = writeln!(
            s,
            "strong positivity: {:?} ({} boxes, depth {})",
            sp.status, sp.certification_stats.boxes_examined, sp.certification_stats.max_depth
        );
    }
    if let Some(w) = &v.witness {
        let _ = writeln!(s, "witness: {}", describe_witness(w));
    }
    if let Some(d) = v.de_angelis {
        let _ = writeln!(
            s,
            "boundary coefficients positive: {d}; eventually positive: {}",
            v.eventually_positive
        );
    }
    if let Some(e) = &v.empirical {
        let _ = writeln!(
            s,
            "empirical threshold: {:?} on m <= {}",
            e.threshold.m0, e.threshold.m_max
        );
    }
    s
}

fn run_classify(
    format: Format,
    text: &str,
    m_max: Option<u64>,
    transcript: bool,
    budgets: &Budgets,
) -> anyhow::Result<Report> {
    let f = parse_poly(text)?;
    let opts = ClassifyOptions {
        certify: budgets.options(),
        empirical_m_max: m_max,
    };
    let verdict = classify_with(&f, &opts)?;
    let transcript = if transcript && verdict.status == VerdictStatus::NotEventuallyNonNegative {
        Some(necessity_witness(&f, &verdict)?)
    } else {
        None
    };
    let body = match format {
        Format::Json => {
            let mut value = serde_json::to_value(&verdict)?;
            if let Some(t) = &transcript {
                value["transcript"] = serde_json::to_value(t)?;
            }
            serde_json::to_string_pretty(&value)? + "\n"
        }
        Format::Csv => format!(
            "input,status,k,l,core,witness\n\"{}\",{},{},{},\"{}\",{}\n",
            verdict.input,
            status_name(verdict.status),
            verdict.k,
            verdict.l,
            verdict.core,
            witness_kind(verdict.witness.as_ref())
        ),
        Format::Text => {
            let mut s = classify_text(&verdict);
            if let Some(t) = &transcript {
                let _ = writeln!(s, "transcript: {} (verified: {})", t.claim, t.verified);
                for e in &t.entries {
                    let _ = writeln!(s, "  m={} index={} value={}", e.m, e.index, e.value);
                }
            }
            s
        }
    };
    Ok(Report {
        body,
        inconclusive: verdict.status == VerdictStatus::Inconclusive,
    })
}

fn run_covering(format: Format, text: &str) -> anyhow::Result<Report> {
    let f = parse_poly(text)?;
    let r = covering_report(&f)?;
    let body = match format {
        Format::Json => envelope("covering", text, &r)?,
        Format::Csv => return no_csv("covering"),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "two-sided covering: {}", r.two_sided);
            let _ = writeln!(
                s,
                "forward: {} uncovered {:?}",
                r.one_sided_forward, r.forward.uncovered
            );
            let _ = writeln!(
                s,
                "reverse: {} uncovered {:?}",
                r.one_sided_reverse, r.reverse.uncovered
            );
            let _ = writeln!(s, "global weight: {:?}", r.global_weight);
            for (k, w) in &r.witnesses {
                let _ = writeln!(s, "  {k} = sum of {w:?}");
            }
            s
        }
    };
    Ok(Report::done(body))
}

fn run_strongpos(format: Format, text: &str, budgets: &Budgets) -> anyhow::Result<Report> {
    let f = parse_poly(text)?;
    let v = certify_with(&f, &budgets.options())?;
    let body = match format {
        Format::Json => envelope("strongpos", text, &v)?,
        Format::Csv => return no_csv("strongpos"),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "status: {:?}", v.status);
            let st = &v.certification_stats;
            let _ = writeln!(
                s,
                "boxes: {}, max depth: {}, min margin: {:.6e}",
                st.boxes_examined, st.max_depth, st.min_margin
            );
            if let Some(w) = &v.witness {
                let _ = writeln!(
                    s,
                    "witness: z = {:.12} {:+.12}i, |f(z)| = {:.6e}, f(|z|) = {:.6e}",
                    w.z_re, w.z_im, w.abs_f_z, w.f_abs_z
                );
            }
            s
        }
    };
    Ok(Report {
        body,
        inconclusive: v.status == Status::Inconclusive,
    })
}

fn run_power(format: Format, text: &str, m: u64) -> anyhow::Result<Report> {
    let f = parse_poly(text)?;
    let p = profile(&f, m)?;
    let coeffs = f.pow(m).to_dense();
    let body = match format {
        Format::Json => {
            let values: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
            envelope(
                "power",
                text,
                json!({
                    "m": m,
                    "coefficients": values,
                    "first_negative": p.first_negative,
                    "negative_indices": p.negative_indices,
                }),
            )?
        }
        Format::Csv => {
            let mut s = String::from("m,n,coefficient\n");
            for (n, c) in coeffs.iter().enumerate() {
                let _ = writeln!(s, "{m},{n},{c}");
            }
            s
        }
        Format::Text => {
            let mut s = format!("f^{m} = {}\n", parse::format(&f.pow(m)));
            let _ = writeln!(s, "negative indices: {:?}", p.negative_indices);
            s
        }
    };
    Ok(Report::done(body))
}

fn run_threshold(format: Format, text: &str, m_max: u64) -> anyhow::Result<Report> {
    let f = parse_poly(text)?;
    let t = threshold_search(&f, m_max)?;
    let body = match format {
        Format::Json => envelope("threshold", text, &t)?,
        Format::Csv => {
            let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
            format!(
                "m0,m_max,window_lo,window_hi\n{},{},{},{}\n",
                opt(t.m0),
                t.m_max,
                opt(t.window.map(|w| w.0)),
                opt(t.window.map(|w| w.1))
            )
        }
        Format::Text => format!("m0: {:?} (checked m <= {})\n{}\n", t.m0, t.m_max, t.note),
    };
    Ok(Report::done(body))
}

fn run_saddle(format: Format, text: &str, n: u64, m: u64) -> anyhow::Result<Report> {
    let f = parse_poly(text)?;
    let e = estimate_coefficient(&f, n, m)?;
    let body = match format {
        Format::Json => envelope("saddle", text, &e)?,
        Format::Csv => format!(
            "n,m,alpha,rho,estimate,exact,rel_error\n{},{},{},{},{},{},{}\n",
            e.n,
            e.m,
            e.alpha,
            e.rho,
            e.estimate,
            e.exact.as_ref().map(|x| x.to_string()).unwrap_or_default(),
            e.rel_error.map(|x| x.to_string()).unwrap_or_default()
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "alpha = {:.6}, rho = {:.12}", e.alpha, e.rho);
            let _ = writeln!(
                s,
                "estimate = {:.12e} (ln = {:.12})",
                e.estimate, e.log_estimate
            );
            if let Some(x) = &e.exact {
                let _ = writeln!(s, "exact = {x}");
            }
            if let Some(r) = e.rel_error {
                let _ = writeln!(s, "relative error = {r:.3e}");
            }
            if let Some(sp) = &e.split {
                let _ = writeln!(
                    s,
                    "I1 = {:.6e}, I2 = {:.6e}, I3 = {:.6e} (eta = {:.4e}, theta0 = {:.4e}), I1 dominant: {}",
                    sp.i1,
                    sp.i2,
                    sp.i3,
                    sp.eta,
                    sp.theta0,
                    sp.dominant()
                );
            }
            s
        }
    };
    Ok(Report::done(body))
}

fn run_partitions(
    format: Format,
    text: &str,
    n: u64,
    m: u64,
    compression: bool,
) -> anyhow::Result<Report> {
    let f = parse_poly(text)?;
    let via_partitions = coefficient_via_partitions(&f, n, m)?;
    let via_convolution = coefficient_by_convolution(&f, n, m)?;
    let check = if compression {
        Some(compression_check(&f, m, n)?)
    } else {
        None
    };
    let body = match format {
        Format::Json => envelope(
            "partitions",
            text,
            json!({
                "n": n,
                "m": m,
                "via_partitions": via_partitions.to_string(),
                "via_convolution": via_convolution.to_string(),
                "agree": via_partitions == via_convolution,
                "compression": check,
            }),
        )?,
        Format::Csv => return no_csv("partitions"),
        Format::Text => {
            let mut s =
                format!("[z^{n}] f^{m} = {via_partitions} (convolution: {via_convolution})\n");
            if let Some(c) = &check {
                let _ = writeln!(
                    s,
                    "compression: {} negative terms, inequality holds: {}, min ratio {:.4}, max preimages {}",
                    c.negative_terms, c.inequality_holds, c.min_ratio, c.max_preimages
                );
            }
            s
        }
    };
    Ok(Report::done(body))
}

fn run_corpus(
    format: Format,
    seed: u64,
    count: usize,
    max_degree: u64,
    budgets: &Budgets,
) -> anyhow::Result<Report> {
    if max_degree == 0 {
        bail!("max-degree must be at least 1");
    }
    let opts = ClassifyOptions {
        certify: budgets.options(),
        empirical_m_max: None,
    };
    let mut rows = Vec::new();
    let mut inconclusive = false;
    for f in corpus::corpus(seed, count, max_degree) {
        let v = classify_with(&f, &opts)?;
        inconclusive |= v.status == VerdictStatus::Inconclusive;
        rows.push((
            v.input.clone(),
            status_name(v.status),
            witness_kind(v.witness.as_ref()),
        ));
    }
    let body = match format {
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(p, s, w)| json!({"polynomial": p, "status": s, "witness": w}))
                .collect();
            envelope(
                "corpus",
                "",
                json!({"seed": seed, "max_degree": max_degree, "results": items}),
            )?
        }
        Format::Csv | Format::Text => {
            let mut s = String::from("index,polynomial,status,witness\n");
            for (i, (p, st, w)) in rows.iter().enumerate() {
                let _ = writeln!(s, "{i},\"{p}\",{st},{w}");
            }
            s
        }
    };
    Ok(Report { body, inconclusive })
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let fmt = cli.format;
    match &cli.command {
        Command::Classify {
            poly,
            m_max,
            transcript,
            budgets,
        } => run_classify(fmt, poly, *m_max, *transcript, budgets),
        Command::Covering { poly } => run_covering(fmt, poly),
        Command::Strongpos { poly, budgets } => run_strongpos(fmt, poly, budgets),
        Command::Power { poly, m } => run_power(fmt, poly, *m),
        Command::Threshold { poly, m_max } => run_threshold(fmt, poly, *m_max),
        Command::Saddle { poly, n, m } => run_saddle(fmt, poly, *n, *m),
        Command::Partitions {
            poly,
            n,
            m,
            compression,
        } => run_partitions(fmt, poly, *n, *m, *compression),
        Command::SignProfile { poly, m_min, m_max } => {
            let f = parse_poly(poly)?;
            Ok(Report::done(sign_profile_csv(&f, *m_min, *m_max)?))
        }
        Command::Corpus {
            seed,
            count,
            max_degree,
            budgets,
        } => run_corpus(fmt, *seed, *count, *max_degree, budgets),
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("EVPOS_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .with_context(|| format!("EVPOS_THREADS={v:?} is not a count"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = configure_threads()
        .and_then(|_| run(&cli))
        .and_then(|report| {
            match &cli.out {
                Some(path) => std::fs::write(path, &report.body)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{}", report.body),
            }
            Ok(report.inconclusive)
        });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
