use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use parthad::hcompletion::{complete_row, gram_criterion, modulus_profile, weighted_criterion};
use parthad::pperm::{count_all, enumerate};
use parthad::submagic::{
    check_grid, classical_points, complete_2x2_to_4x4, complete_commuting, complete_last, grid_from_hadamard,
    parse_pgrid, pre_latin_from_rank_one, sum_bound_check, to_pgrid, ProjGrid,
};
use parthad::torus::{parse_phm, to_phm};
use parthad::verify;
use parthad::{Error, PreLatinSquare, TorusMatrix};

#[derive(Parser)]
#[command(name = "parthad", version, about = "Partial Hadamard matrices, submagic grids and their completions")]
struct Cli {
    /// Numerical tolerance
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for every randomized step
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit one JSON object instead of `key: value` lines
    #[arg(long, global = true)]
    json: bool,
    /// Largest N that `enumerate` will list
    #[arg(long, global = true, default_value_t = 7)]
    limit: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether a .phm matrix has pairwise orthogonal rows
    Check { file: PathBuf },
    /// Build the projection grid of a .phm matrix (or read a .pgrid) and classify it
    Grid { file: PathBuf },
    /// Append the missing row to an (N-1) x N partial Hadamard matrix
    CompleteRow { file: PathBuf },
    /// Complete a submagic grid (.pgrid, or the grid of a .phm) to an N x N magic grid
    CompleteGrid {
        file: PathBuf,
        /// Target size; defaults to M + 1
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Evaluate the row-completion criteria of an (N-1) x N matrix side by side
    Criteria { file: PathBuf },
    /// Semigroup generated by the label permutations of a .pls pre-Latin square
    Semigroup { file: PathBuf },
    /// Number of partial permutations of {1..N}
    Count { n: usize },
    /// List the partial permutations of {1..N}
    Enumerate { n: usize },
    /// Fourier matrix F_n1 x F_n2 x ...
    Fourier {
        #[arg(required = true)]
        orders: Vec<usize>,
    },
    /// Tensor product of two .phm matrices
    Tensor { a: PathBuf, b: PathBuf },
    /// Run the property suites
    Verify {
        /// Run a single criterion by number
        #[arg(long)]
        criterion: Option<u8>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Last,
    Commuting,
    TwoByTwo,
}

/// Exit status plus whatever goes to stdout.
struct Done {
    code: u8,
    out: String,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res = std::result::Result<Done, Failure>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotCompletable(_)
        | Error::NotHadamard(..)
        | Error::NotSubmagic(_)
        | Error::NotCommuting(_)
        | Error::RankError(..)
        | Error::TooManyUndefined { .. } => 1,
        Error::IllConditioned(_) | Error::DegenerateSplit(_) => 3,
        _ => 2,
    }
}

/// Ordered key/value report, rendered as text lines or one JSON object.
#[derive(Default)]
struct Report(Map<String, Value>);

impl Report {
    fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    fn render(&self, as_json: bool) -> String {
        if as_json {
            return format!("{}\n", Value::Object(self.0.clone()));
        }
        self.0.iter().map(|(k, v)| format!("{k}: {}\n", plain(v))).collect()
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::Null => "none".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(plain).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_phm(path: &Path) -> std::result::Result<TorusMatrix, Failure> {
    Ok(parse_phm(&read(path)?)?)
}

/// A `.pgrid` as is, or the row-quotient grid of a `.phm`; the matrix comes along when there is one.
fn read_grid(path: &Path, tol: f64) -> std::result::Result<(ProjGrid, Option<TorusMatrix>), Failure> {
    let text = read(path)?;
    let header = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    if header == Some("pgrid v1") {
        Ok((parse_pgrid(&text)?, None))
    } else {
        let h = parse_phm(&text)?;
        Ok((grid_from_hadamard(&h, tol)?, Some(h)))
    }
}

fn matrix_json(h: &TorusMatrix) -> Value {
    let entries: Vec<Vec<String>> =
        (1..=h.rows()).map(|i| (1..=h.cols()).map(|j| h.entry(i, j).to_string()).collect()).collect();
    json!({ "rows": h.rows(), "cols": h.cols(), "entries": entries })
}

fn emit_matrix(h: &TorusMatrix, as_json: bool) -> String {
    if as_json {
        format!("{}\n", matrix_json(h))
    } else {
        to_phm(h)
    }
}

fn emit_grid(p: &ProjGrid, as_json: bool) -> String {
    if as_json {
        format!("{}\n", json!({ "size": p.size(), "dim": p.dim(), "pgrid": to_pgrid(p) }))
    } else {
        to_pgrid(p)
    }
}

fn square_rows(square: &PreLatinSquare) -> Vec<String> {
    square.rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")).collect()
}

fn check(cli: &Cli, file: &Path) -> Res {
    let h = read_phm(file)?;
    let r = h.is_partial_hadamard(cli.tol);
    let mut rep = Report::default();
    rep.put("rows", h.rows())
        .put("cols", h.cols())
        .put("representation", serde_json::to_value(h.representation()).expect("serializable"))
        .put("partial_hadamard", r.ok)
        .put("exact", r.exact)
        .put("worst_pair", r.worst_pair.map(|(i, j)| format!("({i},{j})")))
        .put("worst_inner_product", r.worst_value)
        .put("worst_modulus_defect", r.worst_modulus_defect);
    if !r.ok {
        if let Some((i, j)) = r.worst_pair {
            eprintln!("rows ({i},{j}) are not orthogonal");
        }
    }
    Ok(Done { code: u8::from(!r.ok), out: rep.render(cli.json) })
}

fn grid(cli: &Cli, file: &Path) -> Res {
    let (p, h) = read_grid(file, cli.tol)?;
    let r = check_grid(&p, cli.tol);
    let v = &r.worst_violations;
    let mut rep = Report::default();
    rep.put("size", p.size())
        .put("dim", p.dim())
        .put("submagic", r.submagic)
        .put("magic", r.magic)
        .put("commuting", r.commuting)
        .put("idempotence_defect", v.idempotence)
        .put("hermiticity_defect", v.hermiticity)
        .put("row_orthogonality_defect", v.row_orthogonality)
        .put("column_orthogonality_defect", v.column_orthogonality)
        .put("row_sum_defect", v.row_sum)
        .put("column_sum_defect", v.column_sum)
        .put("commutator_norm", v.commutator);
    if r.submagic && r.commuting {
        let n_target = h.as_ref().map_or(p.dim(), TorusMatrix::cols);
        let square = match pre_latin_from_rank_one(&p, n_target, cli.tol) {
            Ok(labels) => Value::from(square_rows(&labels.square)),
            Err(Error::RankError(..)) => Value::Null,
            Err(e) => return Err(e.into()),
        };
        let decomposition = classical_points(&p, cli.tol, cli.seed)?;
        let points: Vec<String> =
            decomposition.multiset().iter().map(|(s, mult)| format!("[{s}] x{mult}")).collect();
        let semigroup = decomposition.semigroup()?;
        rep.put("pre_latin_square", square)
            .put("classical_points", points)
            .put("semigroup_order", semigroup.order())
            .put("semigroup_is_group", semigroup.is_group())
            .put("semigroup", semigroup.sorted_elements().iter().map(ToString::to_string).collect::<Vec<_>>());
    }
    Ok(Done { code: u8::from(!r.submagic), out: rep.render(cli.json) })
}

fn complete_grid(cli: &Cli, file: &Path, n: Option<usize>, method: Method) -> Res {
    let (p, _) = read_grid(file, cli.tol)?;
    let m = p.size();
    let n = n.unwrap_or(m + 1);
    let method = match method {
        Method::Auto if n == m + 1 => Method::Last,
        Method::Auto if check_grid(&p, cli.tol).commuting => Method::Commuting,
        Method::Auto if m == 2 && n == 4 => Method::TwoByTwo,
        Method::Auto => return Err(Failure::Usage(format!("no completion procedure for {m}x{m} to {n}x{n}"))),
        other => other,
    };
    let done = match method {
        Method::Last if n != m + 1 => return Err(Failure::Usage(format!("--method last needs --n {}", m + 1))),
        Method::Last => complete_last(&p, cli.tol)?,
        Method::Commuting => complete_commuting(&p, n, cli.tol, cli.seed)?,
        Method::TwoByTwo if (m, n) != (2, 4) => {
            return Err(Failure::Usage("--method two-by-two needs a 2x2 grid and --n 4".into()))
        }
        Method::TwoByTwo => complete_2x2_to_4x4(&p, cli.tol)?,
        Method::Auto => unreachable!("resolved above"),
    };
    Ok(Done { code: 0, out: emit_grid(&done, cli.json) })
}

fn criteria(cli: &Cli, file: &Path) -> Res {
    let h = read_phm(file)?;
    if h.rows() + 1 != h.cols() {
        return Err(Failure::Usage(format!("criteria need an (N-1) x N matrix, got {}x{}", h.rows(), h.cols())));
    }
    let profile = modulus_profile(&h, cli.tol)?;
    let gram = gram_criterion(&h, cli.tol);
    let weighted = weighted_criterion(&h, cli.tol)?;
    // the unchecked grid keeps this usable on matrices that are not partial Hadamard
    let p = ProjGrid::from_row_quotients(&h);
    let last = complete_last(&p, cli.tol);
    let bound = sum_bound_check(&p, h.cols(), cli.tol);
    let last_ok = last.is_ok();
    let mut rep = Report::default();
    rep.put("rows", h.rows())
        .put("cols", h.cols())
        .put("partial_hadamard", h.is_partial_hadamard(cli.tol).ok)
        .put("minor_moduli", profile.moduli.clone())
        .put("hadamard_scale", profile.scale)
        .put("moduli_constant", profile.constant)
        .put("moduli_hadamard_value", profile.hadamard_value)
        .put("gram_projection", gram.passes)
        .put("gram_defect", gram.defect)
        .put("weighted_identity", weighted.passes)
        .put("weighted_c", weighted.c)
        .put("weighted_defect", weighted.defect)
        .put("grid_completes", last_ok)
        .put("grid_obstruction", last.err().map(|e| e.to_string()))
        .put("sum_bound_lambda_min", bound.lambda_min)
        .put("sum_bound", bound.bound)
        .put("sum_bound_passes", bound.passes);
    let verdicts = [profile.constant, gram.passes, weighted.passes, last_ok];
    rep.put("agree", verdicts.iter().all(|&b| b == verdicts[0]));
    let code = u8::from(!verdicts.iter().all(|&b| b));
    Ok(Done { code, out: rep.render(cli.json) })
}

fn semigroup(cli: &Cli, file: &Path) -> Res {
    let square = PreLatinSquare::parse_pls(&read(file)?)?;
    let s = square.semigroup();
    let out = if cli.json {
        let elements: Vec<String> = s.sorted_elements().iter().map(ToString::to_string).collect();
        format!(
            "{}\n",
            json!({
                "size": square.size(),
                "alphabet": square.alphabet(),
                "order": s.order(),
                "is_group": s.is_group(),
                "idempotents": s.idempotents().len(),
                "elements": elements,
            })
        )
    } else {
        s.to_string()
    };
    Ok(Done { code: 0, out })
}

fn enumerate_all(cli: &Cli, n: usize) -> Res {
    let items: Vec<String> = enumerate(n, cli.limit)?.map(|p| p.to_string()).collect();
    let out = if cli.json {
        format!("{}\n", json!({ "n": n, "count": items.len(), "elements": items }))
    } else {
        items.iter().map(|s| format!("{s}\n")).collect()
    };
    Ok(Done { code: 0, out })
}

fn verify_all(cli: &Cli, criterion: Option<u8>) -> Res {
    let cfg = verify::Config { seed: cli.seed, ..verify::Config::default() };
    let outcomes = match criterion {
        Some(id) => vec![verify::run(id, &cfg).ok_or_else(|| Failure::Usage(format!("no criterion {id}")))?],
        None => verify::run_all(&cfg),
    };
    let passed = outcomes.iter().all(|o| o.passed);
    let out = if cli.json {
        format!("{}\n", json!({ "seed": cli.seed, "passed": passed, "criteria": outcomes }))
    } else {
        outcomes.iter().map(|o| format!("{o}\n")).collect()
    };
    Ok(Done { code: u8::from(!passed), out })
}

fn run(cli: &Cli) -> Res {
    match &cli.command {
        Command::Check { file } => check(cli, file),
        Command::Grid { file } => grid(cli, file),
        Command::CompleteRow { file } => {
            let h = complete_row(&read_phm(file)?, cli.tol)?;
            Ok(Done { code: 0, out: emit_matrix(&h, cli.json) })
        }
        Command::CompleteGrid { file, n, method } => complete_grid(cli, file, *n, *method),
        Command::Criteria { file } => criteria(cli, file),
        Command::Semigroup { file } => semigroup(cli, file),
        Command::Count { n } => {
            let c = count_all(*n);
            let out = if cli.json { format!("{}\n", json!({ "n": n, "count": c.to_string() })) } else { format!("{c}\n") };
            Ok(Done { code: 0, out })
        }
        Command::Enumerate { n } => enumerate_all(cli, *n),
        Command::Fourier { orders } => Ok(Done { code: 0, out: emit_matrix(&TorusMatrix::fourier(orders)?, cli.json) }),
        Command::Tensor { a, b } => {
            let t = read_phm(a)?.tensor(&read_phm(b)?);
            Ok(Done { code: 0, out: emit_matrix(&t, cli.json) })
        }
        Command::Verify { criterion } => verify_all(cli, *criterion),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        eprintln!("error: --tol must be a positive number");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(done) => {
            print!("{}", done.out);
            ExitCode::from(done.code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
