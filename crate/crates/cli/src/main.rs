use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wk_core::asymptotics::{
    chat_poly, corollary1_deviation, ctilde_poly, largest_series, lemma6_bounds, lemma6_monotone, lemma6_scaled_gap,
    one_point_series, MultPoly, LEMMA6_GAP_CONSTANT,
};
use wk_core::dvv::{
    c_value, canonical_key, chat_value, default_engine, g_norm, intersection_number, u_value, DVec, MemoCache,
};
use wk_core::harness::{
    check_cross_formulas, check_identities, counterexample_suite, primitive_vectors, sweep_nesting, theorem2_sweep,
    theta_sweep, theta_vs_f, CrossBudget,
};
use wk_core::painleve::{painleve_coeff, painleve_from_intersections, theorem_a_constant, theorem_a_estimate};

/// Digits used when a report carries decimal approximations.
const PRECISION: u32 = 50;

#[derive(Parser)]
#[command(name = "wkint", version, about = "Exact psi-class intersection numbers and large-genus checks")]
struct Cli {
    /// Worker threads for the sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Memo cache file, read before the command and written back after it.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Norm {
    U,
    Int,
    C,
    G,
    Chat,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Onepoint,
    Largest,
}

#[derive(Subcommand)]
enum Command {
    /// One value for the exponent vector `d`, e.g. `2,3`.
    Compute {
        d: String,
        #[arg(long, value_enum, default_value_t = Norm::C)]
        norm: Norm,
    },
    /// C for every primitive vector of a genus.
    Table {
        #[arg(long)]
        genus: u32,
    },
    /// Check that C(3g-2) and C(2^(3g-3)) bound every primitive C-value.
    SweepNesting {
        #[arg(long, default_value_t = 7)]
        gmax: u32,
    },
    /// Largest C(d) over d >= 1 with X(d) = x and n entries.
    Theta {
        #[arg(long)]
        x: u32,
        #[arg(long)]
        n: u32,
    },
    /// Compare the closed formulas with the recursion.
    CheckFormulas {
        /// `two=8,three=5,four=4,n=5,ng=3`, or `empty`.
        #[arg(long)]
        budget: Option<String>,
    },
    /// Recursion identity and inequality spot checks.
    CheckIdentities {
        #[arg(long, default_value_t = 50)]
        sample: usize,
    },
    /// Values and orderings where nesting fails for non-primitive vectors.
    Counterexamples,
    /// Painleve I coefficients against C(2^(3g-3)).
    Painleve {
        #[arg(long, default_value_t = 10)]
        gmax: u32,
    },
    #[command(subcommand)]
    Asym(AsymCommand),
    /// Product bound, deviation decay and majorant checks.
    Bounds {
        #[arg(long, default_value_t = 5)]
        gmax: u32,
    },
    #[command(subcommand)]
    Cache(CacheCommand),
}

#[derive(Subcommand)]
enum AsymCommand {
    /// Coefficient polynomials in the multiplicities up to order k.
    Fit {
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
    /// Expansion coefficients in 1/g of C(3g-2) or C(2^(3g-3)), times pi.
    Series {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
}

#[derive(Subcommand)]
enum CacheCommand {
    /// Fill the cache with every primitive vector up to `--gmax` and write it.
    Save {
        path: PathBuf,
        #[arg(long, default_value_t = 5)]
        gmax: u32,
    },
    /// Read a cache file and summarize it.
    Load { path: PathBuf },
}

/// A command result: the JSON document, a CSV table and the pass flag.
struct Report {
    json: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    ok: bool,
}

impl Report {
    fn new(json: Value, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Report {
        Report { json, header, rows, ok: true }
    }

    fn ok(mut self, ok: bool) -> Report {
        self.ok = ok;
        self
    }
}

fn dec(r: &wk_core::arith::Rational, digits: u32) -> String {
    wk_core::decimal::Decimal::from_rational(r, digits).to_string()
}

fn compute(d: &str, norm: Norm) -> Result<Report> {
    let d = DVec::parse_csv(d)?;
    let (name, exact, approx) = match norm {
        Norm::C => {
            let v = c_value(&d);
            ("c", v.to_string(), dec(&v, 30))
        }
        Norm::U => {
            let v = u_value(&d);
            ("u", v.to_string(), dec(&v, 30))
        }
        Norm::Int => {
            let v = intersection_number(&d);
            ("int", v.to_string(), dec(&v, 30))
        }
        Norm::G => {
            let v = g_norm(&d)?;
            ("g", v.to_string(), dec(&v, 30))
        }
        Norm::Chat => {
            let v = chat_value(&d)?;
            let exact = match v.power {
                0 => v.coeff.to_string(),
                p => format!("{}*(pi*sqrt(3))^{p}", v.coeff),
            };
            ("chat", exact, v.to_decimal(30)?.to_string())
        }
    };
    let json = json!({"d": d.to_csv(), "norm": name, "value": exact, "decimal": {"value": approx, "precision": 30}});
    Ok(Report::new(json, vec!["d", "norm", "value", "decimal"], vec![vec![d.to_csv(), name.into(), exact, approx]]))
}

fn table(genus: u32) -> Result<Report> {
    if genus < 2 {
        bail!("table needs --genus >= 2");
    }
    let vecs = primitive_vectors(genus);
    let vals = wk_core::par::map(&vecs, c_value);
    let rows: Vec<Vec<String>> =
        vecs.iter().zip(&vals).map(|(d, v)| vec![d.to_csv(), v.to_string(), dec(v, 20)]).collect();
    let entries: Vec<Value> = rows.iter().map(|r| json!({"d": r[0], "c": r[1], "decimal": r[2]})).collect();
    let json = json!({"genus": genus, "precision": 20, "entries": entries});
    Ok(Report::new(json, vec!["d", "c", "decimal"], rows))
}

fn nesting(gmax: u32) -> Result<Report> {
    let reports = sweep_nesting(gmax)?;
    let ok = reports.iter().all(|r| r.passed());
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.genus.to_string(),
                r.count.to_string(),
                r.expected_count.to_string(),
                r.min.d.clone(),
                r.min.c.clone(),
                r.max.d.clone(),
                r.max.c.clone(),
                r.max_scaled_deviation.to_string(),
                r.passed().to_string(),
            ]
        })
        .collect();
    let header = vec!["genus", "count", "expected", "min_d", "min_c", "max_d", "max_c", "g_dev", "passed"];
    Ok(Report::new(json!({"passed": ok, "genera": reports}), header, rows).ok(ok))
}

fn theta(x: u32, n: u32) -> Result<Report> {
    let t = theta_sweep(x, n)?;
    let json = json!({"x": x, "n": n, "theta": t.to_string(), "decimal": {"value": dec(&t, 30), "precision": 30}});
    Ok(Report::new(json, vec!["x", "n", "theta"], vec![vec![x.to_string(), n.to_string(), t.to_string()]]))
}

fn formulas(budget: Option<&str>) -> Result<Report> {
    let budget = match budget {
        Some(s) => CrossBudget::parse(s)?,
        None => CrossBudget::default(),
    };
    let r = check_cross_formulas(&budget, &c_value);
    let rows = r
        .suites
        .iter()
        .map(|s| vec![s.name.clone(), s.checked.to_string(), s.first_mismatch.clone().unwrap_or_default()])
        .collect();
    let ok = r.passed();
    Ok(Report::new(json!({"passed": ok, "report": r}), vec!["suite", "checked", "first_mismatch"], rows).ok(ok))
}

fn identities(sample: usize) -> Result<Report> {
    let r = check_identities(sample)?;
    let ok = r.passed();
    let rows = vec![
        vec!["omega11".into(), r.omega11_checked.to_string(), r.omega11_failures.join(" ")],
        vec!["c4".into(), r.c4_checked.to_string(), r.c4_failures.join(" ")],
        vec!["lemma3".into(), r.lemma3_checked.to_string(), r.lemma3_failures.join(" ")],
    ];
    Ok(Report::new(json!({"passed": ok, "report": r}), vec!["check", "checked", "failures"], rows).ok(ok))
}

fn counterexamples() -> Result<Report> {
    let r = counterexample_suite();
    let ok = r.passed();
    let mut rows: Vec<Vec<String>> =
        r.values.iter().map(|v| vec![format!("C({})", v.d), v.computed.clone(), v.ok.to_string()]).collect();
    rows.extend(
        r.inequalities
            .iter()
            .map(|i| vec![i.statement.clone(), format!("{} vs {}", i.lhs, i.rhs), i.holds.to_string()]),
    );
    Ok(Report::new(json!({"passed": ok, "report": r}), vec!["item", "value", "ok"], rows).ok(ok))
}

fn painleve(gmax: u32) -> Result<Report> {
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    let mut ok = true;
    for g in 2..=gmax {
        let c = painleve_coeff(g);
        let bridged = painleve_from_intersections(g)?;
        let eq = c == bridged;
        ok &= eq;
        let est = theorem_a_estimate(g, 20)?.to_string();
        entries.push(json!({"g": g, "c_g": c.to_string(), "from_intersections": bridged.to_string(), "equal": eq, "normalized_ratio": est}));
        rows.push(vec![g.to_string(), c.to_string(), bridged.to_string(), eq.to_string(), est]);
    }
    let constant = theorem_a_constant(20)?.to_string();
    let json = json!({"passed": ok, "precision": 20, "limit_constant": constant, "genera": entries});
    Ok(Report::new(json, vec!["g", "c_g", "from_intersections", "equal", "normalized_ratio"], rows).ok(ok))
}

fn poly_rows(which: &str, k: usize, p: &MultPoly, rows: &mut Vec<Vec<String>>) {
    let v = p.to_json(k);
    for m in v["monomials"].as_array().into_iter().flatten() {
        let mono: Vec<String> = m["exponents"]
            .as_object()
            .into_iter()
            .flatten()
            .map(|(name, e)| if e == 1 { name.clone() } else { format!("{name}^{e}") })
            .collect();
        let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
        rows.push(vec![which.into(), k.to_string(), mono, m["coefficient"].as_str().unwrap_or("").into()]);
    }
}

fn asym_fit(k_max: usize) -> Result<Report> {
    let mut chat = Vec::new();
    let mut ctilde = Vec::new();
    let mut rows = Vec::new();
    for k in 0..=k_max {
        let a = chat_poly(k)?;
        let b = ctilde_poly(k)?;
        poly_rows("chat", k, &a, &mut rows);
        poly_rows("ctilde", k, &b, &mut rows);
        chat.push(json!({"k": k, "poly": a.to_string(), "terms": a.to_json(k)}));
        ctilde.push(json!({"k": k, "poly": b.to_string(), "terms": b.to_json(k)}));
    }
    let json = json!({"variable": "1/X", "chat": chat, "ctilde": ctilde});
    Ok(Report::new(json, vec!["family", "k", "monomial", "coefficient"], rows))
}

fn asym_series(which: Which, order: usize) -> Result<Report> {
    let (name, s) = match which {
        Which::Onepoint => ("onepoint", one_point_series(order)),
        Which::Largest => ("largest", largest_series(order)),
    };
    let coeffs: Vec<String> = s.coeffs().iter().map(ToString::to_string).collect();
    let rows = coeffs.iter().enumerate().map(|(i, c)| vec![i.to_string(), c.clone()]).collect();
    let json = json!({"which": name, "variable": "1/g", "order": order, "coefficients": coeffs});
    Ok(Report::new(json, vec!["power", "coefficient"], rows))
}

fn bounds(gmax: u32) -> Result<Report> {
    let mut rows = Vec::new();
    let t2 = theorem2_sweep(gmax, 4, 2, PRECISION)?;
    rows.push(vec!["theorem2".into(), format!("max {} at {}", t2.max_scaled_error, t2.worst), t2.holds.to_string()]);

    let mut decay = Vec::new();
    let mut decay_ok = true;
    for k in 0..=3u32 {
        let devs: Vec<_> = (4..=6).map(|g| corollary1_deviation(g, k, 30)).collect::<Result<_, _>>()?;
        let dec_ok = devs.windows(2).all(|w| w[1] < w[0]);
        decay_ok &= dec_ok;
        let shown: Vec<String> = devs.iter().map(ToString::to_string).collect();
        rows.push(vec![format!("corollary1 k={k}"), shown.join(" "), dec_ok.to_string()]);
        decay.push(json!({"k": k, "g": [4, 5, 6], "deviation": shown, "decreasing": dec_ok}));
    }

    let range_ok = lemma6_bounds(200, 200, PRECISION)?;
    let mono_ok = lemma6_monotone(200, 200, PRECISION)?;
    let (gap, gx, gn) = lemma6_scaled_gap(50, 200, PRECISION)?;
    rows.push(vec!["f range".into(), "1/pi <= f <= 1 on X,n <= 200".into(), range_ok.to_string()]);
    rows.push(vec!["f monotone".into(), "f(X,n+1) >= f(X,n) on X,n <= 200".into(), mono_ok.to_string()]);
    let gap_ok = gap.to_rational() <= wk_core::arith::int(LEMMA6_GAP_CONSTANT);
    rows.push(vec!["f gap".into(), format!("{gap} at X={gx} n={gn}"), gap_ok.to_string()]);

    let theta = theta_vs_f(14, PRECISION)?;
    let theta_ok = theta.iter().all(|c| c.holds);
    rows.push(vec!["theta <= f".into(), format!("{} pairs with X <= 14", theta.len()), theta_ok.to_string()]);

    let ok = t2.holds && decay_ok && range_ok && mono_ok && gap_ok && theta_ok;
    let json = json!({
        "passed": ok,
        "precision": PRECISION,
        "theorem2": t2,
        "corollary1": decay,
        "f_range": range_ok,
        "f_monotone": mono_ok,
        "f_scaled_gap": {"value": gap, "x": gx, "n": gn, "bound": LEMMA6_GAP_CONSTANT, "holds": gap_ok},
        "theta_below_f": theta,
    });
    Ok(Report::new(json, vec!["check", "detail", "ok"], rows).ok(ok))
}

fn absorb(cache: &MemoCache) {
    let target = default_engine().cache();
    for (d, v) in cache.entries() {
        let x = d.x_int().unwrap_or(0);
        target.insert(canonical_key(&d), v, x);
    }
}

fn cache_cmd(cmd: &CacheCommand) -> Result<Report> {
    match cmd {
        CacheCommand::Save { path, gmax } => {
            for g in 2..=*gmax {
                wk_core::par::map(&primitive_vectors(g), c_value);
            }
            let cache = default_engine().cache();
            cache.save(path).with_context(|| format!("writing {}", path.display()))?;
            let json = json!({"path": path.display().to_string(), "entries": cache.len(), "max_x": cache.max_x()});
            let rows = vec![vec![path.display().to_string(), cache.len().to_string(), cache.max_x().to_string()]];
            Ok(Report::new(json, vec!["path", "entries", "max_x"], rows))
        }
        CacheCommand::Load { path } => {
            let cache = MemoCache::load(path).with_context(|| format!("reading {}", path.display()))?;
            let json = json!({
                "path": path.display().to_string(),
                "version": MemoCache::version(),
                "entries": cache.len(),
                "max_x": cache.max_x(),
            });
            let rows = vec![vec![path.display().to_string(), cache.len().to_string(), cache.max_x().to_string()]];
            absorb(&cache);
            Ok(Report::new(json, vec!["path", "entries", "max_x"], rows))
        }
    }
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Compute { d, norm } => compute(d, *norm),
        Command::Table { genus } => table(*genus),
        Command::SweepNesting { gmax } => nesting(*gmax),
        Command::Theta { x, n } => theta(*x, *n),
        Command::CheckFormulas { budget } => formulas(budget.as_deref()),
        Command::CheckIdentities { sample } => identities(*sample),
        Command::Counterexamples => counterexamples(),
        Command::Painleve { gmax } => painleve(*gmax),
        Command::Asym(AsymCommand::Fit { k }) => asym_fit(*k),
        Command::Asym(AsymCommand::Series { which, order }) => asym_series(*which, *order),
        Command::Bounds { gmax } => bounds(*gmax),
        Command::Cache(c) => cache_cmd(c),
    }
}

fn emit(report: &Report, format: Format, out: Option<&Path>) -> Result<()> {
    let mut sink: Box<dyn Write> = match out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &report.json)?;
            writeln!(sink)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(&report.header)?;
            for row in &report.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn configure_threads(n: Option<usize>) -> Result<()> {
    #[cfg(feature = "parallel")]
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| -> Result<bool> {
        configure_threads(cli.threads)?;
        if let Some(path) = cli.cache.as_deref().filter(|p| p.exists()) {
            absorb(&MemoCache::load(path).with_context(|| format!("reading cache {}", path.display()))?);
        }
        let report = run(&cli)?;
        emit(&report, cli.format, cli.out.as_deref())?;
        if let Some(path) = &cli.cache {
            default_engine().cache().save(path).with_context(|| format!("writing cache {}", path.display()))?;
        }
        Ok(report.ok)
    })();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
