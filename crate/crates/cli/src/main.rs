use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use gabrank::gf::{default_spec, Field, FieldSpec};
use gabrank::linpoly::Algebra;
use gabrank::rankcode::{gabidulin, Code, CodeDoc};
use gabrank::replicate::report::{verify_theorems, ClaimStatus, TheoremOptions, TheoremReport};
use gabrank::replicate::table1::{find_row, table1_rows, verify_row, RowReport, Table1Row};
use gabrank::search::{exact_tensor_rank, random_upper_bound, SearchConfig, SearchResult, Status};
use gabrank::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "gabrank", version, about = "Tensor rank of generalized Gabidulin codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct OutArgs {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include wall-clock times in the output.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Args, Clone)]
struct FieldArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    n: u32,
    /// Modulus of F_{q^n} over F_p, highest degree first ("10011" or "1,0,4,4,2").
    #[arg(long)]
    modulus: Option<String>,
}

#[derive(Args, Clone)]
struct CodeArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    s: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Describe the field F_{q^n} and its subfield F_q.
    FieldInfo(FieldArgs),
    /// Tensor rank of G_{k,s} in L_{n,q}, or of a code read from JSON.
    Trk {
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long)]
        modulus: Option<String>,
        /// Code as JSON ({"field": …, "basis": …}) instead of a Gabidulin code.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["q", "n", "k"])]
        code: Option<PathBuf>,
        /// Largest number of extra generators searched.
        #[arg(long)]
        t_max: Option<usize>,
        /// Element budget for a single span computation.
        #[arg(long, default_value_t = 1 << 24)]
        budget: u128,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run the long lower-bound refutation for n=4, k=2, q≥4.
        #[arg(long)]
        deep: bool,
        /// Search without fixing the first generator.
        #[arg(long)]
        no_symmetry: bool,
    },
    /// Re-verify the embedded table of perfect bases.
    VerifyTable {
        /// Only the row "n,k,q".
        #[arg(long, value_parser = parse_row_key)]
        row: Option<(u32, u32, u32)>,
    },
    /// Run every finite check of the algebraic claims at one q.
    VerifyTheorems {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random instances per class for the 10×10 matrix checks.
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Random search for a rank-one cover of size R.
    SearchRandom {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time the table cases.
    Bench {
        /// Include the q=4 refutation.
        #[arg(long)]
        deep: bool,
    },
}

fn parse_row_key(s: &str) -> Result<(u32, u32, u32), String> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [n, k, q] => Ok((n, k, q)),
        _ => Err("expected n,k,q".into()),
    }
}

/// Failure with an exit code and a message for stderr.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } | Error::Timeout { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Fail(code, e.to_string())
    }
}

fn parse_modulus(text: &str) -> Result<Vec<u32>, Fail> {
    let bad = |t: &str| Fail(EXIT_USAGE, format!("--modulus: cannot parse {t:?}"));
    if text.contains(',') {
        text.split(',').map(|d| d.trim().parse().map_err(|_| bad(text))).collect()
    } else {
        text.chars().map(|c| c.to_digit(10).ok_or_else(|| bad(text))).collect()
    }
}

fn field_spec(q: u32, n: u32, modulus: Option<&str>) -> Result<FieldSpec, Fail> {
    let mut spec = default_spec(q, n).map_err(|e| Fail(EXIT_USAGE, format!("--q {q} --n {n}: {e}")))?;
    if let Some(m) = modulus {
        spec.modulus = parse_modulus(m)?;
    }
    Ok(spec)
}

fn build_algebra(spec: FieldSpec) -> Result<Arc<Algebra>, Fail> {
    let text = spec.to_string();
    let field = Field::build(spec).map_err(|e| Fail(EXIT_USAGE, format!("{text}: {e}")))?;
    Ok(Algebra::new(Arc::new(field))?)
}

fn gabidulin_code(alg: &Arc<Algebra>, k: usize, s: usize) -> Result<Code, Fail> {
    gabidulin(alg, k, s).map_err(|e| Fail(EXIT_USAGE, format!("--k {k} --s {s}: {e}")))
}

/// Prints either JSON or text, to stdout or `--out`.
struct Output<'a> {
    args: &'a OutArgs,
}

impl Output<'_> {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> Result<(), Fail> {
        let body = if self.args.json {
            let mut s = serde_json::to_string_pretty(value).expect("serializable");
            s.push('\n');
            s
        } else {
            text()
        };
        match &self.args.out {
            Some(path) => fs::write(path, body).map_err(|e| Fail(EXIT_USAGE, format!("--out {}: {e}", path.display()))),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(body.as_bytes())
                    .map_err(|e| Fail(EXIT_FAIL, format!("stdout: {e}")))
            }
        }
    }
}

fn poly_text(m: &[u32]) -> String {
    let deg = m.len() - 1;
    let terms: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            let e = deg - i;
            let coeff = if c == 1 && e > 0 { String::new() } else { c.to_string() };
            match e {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{e}"),
            }
        })
        .collect();
    terms.join("+")
}

#[derive(Serialize)]
struct FieldInfo {
    field: FieldSpec,
    order: u32,
    q: u32,
    n: u32,
    /// `η^{fq_gen_exp}` generates `F_q^*`.
    fq_gen_exp: u32,
}

fn field_info(out: &Output, args: FieldArgs) -> Result<(), Fail> {
    let alg = build_algebra(field_spec(args.q, args.n, args.modulus.as_deref())?)?;
    let f = alg.field();
    let info = FieldInfo {
        field: f.spec().clone(),
        order: f.order(),
        q: f.q(),
        n: f.n(),
        fq_gen_exp: f.fq_step(),
    };
    out.emit(&info, || {
        format!(
            "F_{{{}}} = F_{}[x]/({}), q = {}, n = {}, F_q^* generated by η^{}\n",
            info.order,
            info.field.p,
            poly_text(&info.field.modulus),
            info.q,
            info.n,
            info.fq_gen_exp
        )
    })
}

#[derive(Serialize)]
struct TrkOutput {
    #[serde(flatten)]
    result: SearchResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    trk: Option<usize>,
}

fn search_text(r: &SearchResult) -> String {
    let code = match (r.k, r.s) {
        (Some(k), Some(s)) => format!("G_{{{k},{s}}} in L_{{{},{}}}", r.n, r.q),
        _ => format!("code in L_{{{},{}}}", r.n, r.q),
    };
    let value = match (r.status, r.trk_high) {
        (Status::Exact, _) => format!("trk = {}", r.trk_low),
        (_, Some(h)) if r.status == Status::UpperBoundOnly => format!("trk <= {h}"),
        (_, Some(h)) => format!("{} <= trk <= {h}", r.trk_low),
        (_, None) => format!("trk >= {}", r.trk_low),
    };
    let mut s = format!("{code}: {value} ({:?}, {} nodes", r.status, r.nodes);
    if let Some(ms) = r.ms {
        s.push_str(&format!(", {ms} ms"));
    }
    s.push_str(")\n");
    if let Some(b) = &r.basis {
        let pairs: Vec<String> = b.iter().map(|l| format!("({},{})", l.i, l.j)).collect();
        s.push_str(&format!("basis: {}\n", pairs.join(",")));
    }
    if let Some(note) = &r.note {
        s.push_str(&format!("note: {note}\n"));
    }
    s
}

/// The embedded basis for this code, when its field is exactly the row's field.
fn table_row(code: &Code) -> Option<Table1Row> {
    let g = code.gabidulin_params()?;
    let alg = code.algebra();
    let row = find_row(alg.n() as u32, g.k as u32, alg.q() as u32)?;
    (g.s == row.s as usize && alg.field().spec() == &row.field).then_some(row)
}

fn push_note(r: &mut SearchResult, note: &str) {
    r.note = Some(match r.note.take() {
        Some(prev) => format!("{prev}; {note}"),
        None => note.to_string(),
    });
}

#[allow(clippy::too_many_arguments)]
fn trk(
    out: &Output,
    q: Option<u32>,
    n: Option<u32>,
    k: Option<usize>,
    s: usize,
    modulus: Option<String>,
    code_file: Option<PathBuf>,
    t_max: Option<usize>,
    budget: u128,
    seed: u64,
    deep: bool,
    no_symmetry: bool,
) -> Result<bool, Fail> {
    let code = match code_file {
        Some(path) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| Fail(EXIT_USAGE, format!("--code {}: {e}", path.display())))?;
            let doc: CodeDoc = serde_json::from_str(&text)
                .map_err(|e| Fail(EXIT_USAGE, format!("--code {}: {e}", path.display())))?;
            Code::from_doc(&doc)?
        }
        None => {
            let missing = |flag: &str| Fail(EXIT_USAGE, format!("trk: {flag} is required without --code"));
            let (q, n, k) = (q.ok_or_else(|| missing("--q"))?, n.ok_or_else(|| missing("--n"))?, k.ok_or_else(|| missing("--k"))?);
            let alg = build_algebra(field_spec(q, n, modulus.as_deref())?)?;
            gabidulin_code(&alg, k, s)?
        }
    };
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut hint = None;
    if let Some(row) = table_row(&code) {
        if verify_row(&row)?.passed() {
            hint = Some(row.basis);
        } else {
            notes.push(format!("embedded basis for ({},{},{}) does not verify and was ignored", row.n, row.k, row.q));
        }
    }
    let alg = code.algebra();
    let gabidulin_k = code.gabidulin_params().map(|g| g.k);
    let gated = !deep && t_max.is_none() && alg.n() == 4 && alg.q() >= 4 && gabidulin_k == Some(2);
    if gated && hint.is_none() {
        let r = random_upper_bound(&code, 11, 1_000_000, seed)?;
        hint = r.basis;
    }
    let mut cfg = SearchConfig {
        element_budget: budget,
        use_symmetry: !no_symmetry,
        seed,
        upper_hint: hint,
        ..SearchConfig::default()
    };
    if let Some(t) = t_max {
        cfg.t_max = t;
    } else if gated {
        // stop before the first refutation level t = d − 1
        cfg.t_max = alg.n() - 2 - 1;
        notes.push("trk = 11 for every q >= 3 (theorem); rerun with --deep to certify the lower bound".to_string());
    }
    let mut result = exact_tensor_rank(&code, &cfg)?;
    if out.args.timing {
        result.ms = Some(start.elapsed().as_millis());
    }
    for n in &notes {
        push_note(&mut result, n);
    }
    let trk = (result.status == Status::Exact).then_some(result.trk_low);
    let output = TrkOutput { result, trk };
    out.emit(&output, || search_text(&output.result))?;
    Ok(true)
}

fn row_text(row: &Table1Row, rep: &RowReport) -> String {
    let tr = if row.trk_low == row.trk_high {
        row.trk_high.to_string()
    } else {
        format!("in {{{},{}}}", row.trk_low, row.trk_high)
    };
    let mtr = match row.mtr {
        gabrank::replicate::table1::MtrFlag::Yes => "yes",
        gabrank::replicate::table1::MtrFlag::No => "no",
        gabrank::replicate::table1::MtrFlag::Unknown => "?",
    };
    let pairs: Vec<String> = row.basis.iter().map(|l| format!("({},{})", l.i, l.j)).collect();
    let status = if rep.passed() {
        "ok".to_string()
    } else {
        format!("FAIL: {}", rep.failures.join("; "))
    };
    format!(
        "{:>2} {:>2} {:>2}  {:<9} {:<4} {:<26} {}\n          {}\n",
        row.n,
        row.k,
        row.q,
        tr,
        mtr,
        poly_text(&row.field.modulus),
        status,
        pairs.join(",")
    )
}

fn verify_table_cmd(out: &Output, key: Option<(u32, u32, u32)>) -> Result<bool, Fail> {
    let rows: Vec<Table1Row> = match key {
        Some((n, k, q)) => vec![find_row(n, k, q).ok_or_else(|| Fail(EXIT_USAGE, format!("--row {n},{k},{q}: no such row")))?],
        None => table1_rows(),
    };
    let reports: Vec<RowReport> = rows.iter().map(verify_row).collect::<Result<_, _>>()?;
    let all = reports.iter().all(RowReport::passed);
    out.emit(&reports, || {
        let mut s = " n  k  q  TR        MTR  MinPol                     status\n".to_string();
        for (row, rep) in rows.iter().zip(&reports) {
            s.push_str(&row_text(row, rep));
        }
        let bad = reports.iter().filter(|r| !r.passed()).count();
        s.push_str(&format!("{} of {} rows verified\n", reports.len() - bad, reports.len()));
        s
    })?;
    Ok(all)
}

fn theorems_text(rep: &TheoremReport) -> String {
    let mut s = format!("q = {}\n", rep.q);
    for c in &rep.claims {
        let status = match c.status {
            ClaimStatus::Pass => "pass",
            ClaimStatus::Fail => "FAIL",
            ClaimStatus::Vacuous => "vacuous",
        };
        s.push_str(&format!("  {:<26} {:<8}", c.claim_id, status));
        if let Some(d) = &c.detail {
            s.push_str(&format!(" {d}"));
        }
        if let Some(x) = &c.counterexample {
            s.push_str(&format!("\n  {:<26} counterexample: {x}", ""));
        }
        s.push('\n');
    }
    s
}

fn verify_theorems_cmd(out: &Output, q: u32, seed: u64, samples: usize) -> Result<bool, Fail> {
    let opts = TheoremOptions {
        seed,
        ranghi_per_class: samples,
        ..TheoremOptions::default()
    };
    let rep = verify_theorems(q, &opts).map_err(|e| match e {
        Error::BudgetExceeded { .. } => Fail::from(e),
        e => Fail(EXIT_USAGE, format!("--q {q}: {e}")),
    })?;
    out.emit(&rep, || theorems_text(&rep))?;
    Ok(rep.passed())
}

fn search_random_cmd(out: &Output, args: CodeArgs, r: usize, trials: u64, seed: u64) -> Result<bool, Fail> {
    let alg = build_algebra(field_spec(args.field.q, args.field.n, args.field.modulus.as_deref())?)?;
    let code = gabidulin_code(&alg, args.k, args.s)?;
    let start = Instant::now();
    let mut result = random_upper_bound(&code, r, trials, seed)?;
    if out.args.timing {
        result.ms = Some(start.elapsed().as_millis());
    }
    out.emit(&result, || search_text(&result))?;
    Ok(true)
}

#[derive(Serialize)]
struct BenchCase {
    case: String,
    status: Status,
    trk_low: usize,
    trk_high: Option<usize>,
    nodes: u64,
    ms: u128,
}

fn bench(out: &Output, deep: bool) -> Result<bool, Fail> {
    let mut cases: Vec<(u32, u32, usize, bool)> = vec![(2, 3, 2, true), (2, 4, 2, true), (2, 4, 3, true), (3, 4, 2, true), (3, 4, 3, true)];
    if deep {
        cases.push((4, 4, 2, true));
    }
    let mut rows = Vec::new();
    for (q, n, k, _) in cases {
        let alg = build_algebra(default_spec(q, n)?)?;
        let code = gabidulin_code(&alg, k, 1)?;
        let start = Instant::now();
        let r = exact_tensor_rank(&code, &SearchConfig::default())?;
        rows.push(BenchCase {
            case: format!("trk G_{{{k},1}} in L_{{{n},{q}}}"),
            status: r.status,
            trk_low: r.trk_low,
            trk_high: r.trk_high,
            nodes: r.nodes,
            ms: start.elapsed().as_millis(),
        });
    }
    for q in [4, 5] {
        let alg = build_algebra(default_spec(q, 4)?)?;
        let code = gabidulin_code(&alg, 1, 1)?;
        let start = Instant::now();
        let r = random_upper_bound(&code, 8, 1_000_000, 0)?;
        rows.push(BenchCase {
            case: format!("random R=8 G_{{1,1}} in L_{{4,{q}}}"),
            status: r.status,
            trk_low: r.trk_low,
            trk_high: r.trk_high,
            nodes: r.nodes,
            ms: start.elapsed().as_millis(),
        });
    }
    out.emit(&rows, || {
        rows.iter()
            .map(|c| {
                let high = c.trk_high.map_or("?".to_string(), |h| h.to_string());
                format!("{:<36} {:<15} [{}, {high}] {} nodes {} ms\n", c.case, format!("{:?}", c.status), c.trk_low, c.nodes, c.ms)
            })
            .collect()
    })?;
    Ok(true)
}

fn run(cli: Cli) -> Result<bool, Fail> {
    if let Some(t) = cli.out.threads {
        if t == 0 {
            return Err(Fail(EXIT_USAGE, "--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Fail(EXIT_USAGE, format!("--threads: {e}")))?;
    }
    let out = Output { args: &cli.out };
    match cli.cmd {
        Cmd::FieldInfo(args) => field_info(&out, args).map(|_| true),
        Cmd::Trk {
            q,
            n,
            k,
            s,
            modulus,
            code,
            t_max,
            budget,
            seed,
            deep,
            no_symmetry,
        } => trk(&out, q, n, k, s, modulus, code, t_max, budget, seed, deep, no_symmetry),
        Cmd::VerifyTable { row } => verify_table_cmd(&out, row),
        Cmd::VerifyTheorems { q, seed, samples } => verify_theorems_cmd(&out, q, seed, samples),
        Cmd::SearchRandom { code, r, trials, seed } => search_random_cmd(&out, code, r, trials, seed),
        Cmd::Bench { deep } => bench(&out, deep),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
