use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use zpk_cycles::catmap::{self, CatParams, CatPrediction, CensusReport, StabilizationThreshold};
use zpk_cycles::dynamics::{
    build_d_matrix, dmatrix_recursion_check, embedding_check, period_lift_law_sweep, CycleHistogram, DMatrix, EmbeddingReport,
    LiftLawSweep, LinearMap, RecursionReport,
};
use zpk_cycles::order::{self, KsRule};
use zpk_cycles::poly::IntPoly;
use zpk_cycles::{Error, Modulus, Threshold};

use crate::config::{resolve_budget, Settings};
use crate::render::{self, Render};
use crate::{Cli, Command, Format, MapArgs, PolyArgs};

/// Largest graph written as DOT.
pub const DOT_LIMIT: u64 = 10_000;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct RootReport {
    pub root: String,
    pub multiplicity: u32,
    pub order: u128,
    pub fk: Option<Threshold>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PolyReport {
    pub f: String,
    pub p: u64,
    pub k: u32,
    pub p1: u128,
    pub ks: Threshold,
    pub rule: KsRule,
    pub splitting_degree: usize,
    pub roots: Vec<RootReport>,
    /// `(k, P_k)` for every precision up to k.
    pub orders: Vec<(u32, u128)>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct OrderCheck {
    pub f: String,
    pub p: u64,
    pub k: u32,
    pub theory: u128,
    pub oracle: u128,
    pub ks: Threshold,
    pub pass: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CatReport {
    pub a: u64,
    pub b: u64,
    pub p: u64,
    pub k: u32,
    pub poly: String,
    pub prediction: Option<CatPrediction>,
    pub notice: Option<String>,
    pub period: u128,
    pub histogram: Option<CycleHistogram>,
    pub thresholds: Option<StabilizationThreshold>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct EnumerateReport {
    pub map: String,
    pub p: u64,
    pub k: u32,
    pub dim: usize,
    pub histogram: CycleHistogram,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct GraphReport {
    pub map: String,
    pub p: u64,
    pub k: u32,
    pub histogram: CycleHistogram,
    pub global_period: u128,
    pub lengths_divide_period: bool,
    pub embedding: Option<EmbeddingReport>,
    pub lift_law: Option<LiftLawSweep>,
    pub pass: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct DMatrixReport {
    pub map: String,
    pub p: u64,
    pub v: u32,
    pub d: DMatrix,
    pub recursion: RecursionReport,
    pub pass: bool,
}

/// What a subcommand produced: a rendered report and its verdict.
struct Done {
    body: String,
    pass: bool,
}

pub fn run(cli: &Cli) -> Result<bool, String> {
    let settings = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    let budget = resolve_budget(cli.budget, std::env::var("ZPK_BUDGET").ok(), &settings)?;
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err("--threads must be positive".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    let fmt = cli.format;
    let done = match &cli.command {
        Command::AnalyzePoly(args) => analyze_poly(args, fmt),
        Command::AnalyzeCat(args) => analyze_cat(args.p, args.k, args.a, args.b, budget, fmt),
        Command::Enumerate(args) => enumerate(args, budget, fmt),
        Command::VerifyOrder(args) => verify_order(args, fmt),
        Command::VerifyGraph(args) => verify_graph(args, budget, fmt),
        Command::Census { p, k } => census(*p, *k, budget, fmt),
        Command::DMatrix { map, v } => d_matrix(map, *v, budget, fmt),
    }?;
    write_out(&done.body, cli.out.as_ref(), &settings)?;
    Ok(done.pass)
}

fn write_out(body: &str, out: Option<&PathBuf>, settings: &Settings) -> Result<(), String> {
    let Some(path) = out else {
        print!("{body}");
        return Ok(());
    };
    let path = match &settings.out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.clone(),
    };
    if let Some(parent) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| format!("cannot create {}: {e}", parent.display()))?;
    }
    std::fs::write(&path, body).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn lib(e: Error) -> String {
    match e {
        Error::Capacity { what, required, limit } => {
            format!("{what}: needs {required}, budget is {limit}; raise --budget or ZPK_BUDGET to at least {required}")
        }
        other => other.to_string(),
    }
}

fn emit<R: Render>(r: &R, fmt: Format, pass: bool) -> Result<Done, String> {
    Ok(Done { body: render::render(r, fmt)?, pass })
}

fn parse_poly(s: &str, p: u64, k: u32) -> Result<(IntPoly, Modulus), String> {
    let m = Modulus::new(p, k).map_err(lib)?;
    let f = IntPoly::parse(s).map_err(lib)?;
    f.check_range(&m).map_err(lib)?;
    if !f.is_monic() {
        return Err(format!("polynomial {f} must be monic"));
    }
    Ok((f, m))
}

fn analyze_poly(args: &PolyArgs, fmt: Format) -> Result<Done, String> {
    let (f, _) = parse_poly(&args.poly, args.p, args.k)?;
    let prof = order::ks_of_poly(&f, args.p, order::DEFAULT_SEARCH_CAP).map_err(lib)?;
    let roots = prof
        .roots
        .iter()
        .map(|r| RootReport { root: r.root.to_string(), multiplicity: r.multiplicity, order: r.order, fk: r.fk })
        .collect();
    let orders = (1..=args.k).map(|k| Ok((k, prof.pk(k).map_err(lib)?))).collect::<Result<_, String>>()?;
    let r = PolyReport {
        f: f.to_string(),
        p: args.p,
        k: args.k,
        p1: prof.p1,
        ks: prof.ks,
        rule: prof.rule,
        splitting_degree: prof.d,
        roots,
        orders,
    };
    emit(&r, fmt, true)
}

fn verify_order(args: &PolyArgs, fmt: Format) -> Result<Done, String> {
    let (f, m) = parse_poly(&args.poly, args.p, args.k)?;
    let prof = order::ks_of_poly(&f, args.p, order::DEFAULT_SEARCH_CAP).map_err(lib)?;
    let theory = prof.pk(args.k).map_err(lib)?;
    let oracle = order::poly_order_oracle(&f, &m, order::default_oracle_bound(&f, &m).map_err(lib)?).map_err(lib)?;
    let r = OrderCheck { f: f.to_string(), p: args.p, k: args.k, theory, oracle, ks: prof.ks, pass: theory == oracle };
    let pass = r.pass;
    emit(&r, fmt, pass)
}

fn analyze_cat(p: u64, k: u32, a: u64, b: u64, budget: u64, fmt: Format) -> Result<Done, String> {
    let params = CatParams::new(a, b, p, k).map_err(lib)?;
    let q = params.modulus.q_u64().ok_or("modulus too large")?;
    let period = catmap::measured_period(a, b, q);
    let poly = catmap::cat_minimal_poly(&params);
    let mut checks = vec![Check {
        name: "determinant".into(),
        pass: params.determinant() == 1,
        detail: format!("det C = {}", params.determinant()),
    }];
    let (prediction, notice) = match catmap::cat_table_predict(&params) {
        Ok(pred) => {
            checks.push(Check {
                name: "table period".into(),
                pass: pred.period == period,
                detail: format!("table {} measured {}", pred.period, period),
            });
            (Some(pred), None)
        }
        Err(Error::OutOfTable { .. }) => (None, Some(format!("the parameter table covers p > 3; p = {p} is analysed without it"))),
        Err(e) => return Err(lib(e)),
    };
    if !params.is_trivial() && (a % p != 0 || b % p != 0) {
        let pk = order::pk_of_poly(&poly, p, k).map_err(lib)?;
        checks.push(Check { name: "polynomial order".into(), pass: pk == period, detail: format!("P_k(f) {pk} measured {period}") });
    }
    let states = (q as u128).pow(2);
    let histogram = if states <= budget as u128 {
        let h = catmap::cat_enumerate(&params, budget).map_err(lib)?;
        let l = h.lcm().map_err(lib)?;
        checks.push(Check { name: "cycle lengths".into(), pass: l == period, detail: format!("lcm {l} measured {period}") });
        if k >= 2 {
            let e = embedding_check(&params.map().map_err(lib)?, k, budget).map_err(lib)?;
            checks.push(Check {
                name: "multiples of p".into(),
                pass: e.pass,
                detail: format!("{} mismatched states", e.pointwise_mismatches),
            });
        }
        Some(h)
    } else {
        None
    };
    let thresholds = if params.is_trivial() { None } else { Some(catmap::cat_stabilization_threshold(&params).map_err(lib)?) };
    let pass = checks.iter().all(|c| c.pass);
    let r = CatReport { a, b, p, k, poly: poly.to_string(), prediction, notice, period, histogram, thresholds, checks, pass };
    emit(&r, fmt, pass)
}

fn build_map(args: &MapArgs) -> Result<(LinearMap, Option<CatParams>), String> {
    match (args.a, args.b, &args.poly) {
        (Some(a), Some(b), None) => {
            let params = CatParams::new(a, b, args.p, args.k).map_err(lib)?;
            Ok((params.map().map_err(lib)?, Some(params)))
        }
        (None, None, Some(s)) => {
            let (f, _) = parse_poly(s, args.p, args.k)?;
            Ok((LinearMap::companion(args.p, &f, args.n).map_err(lib)?, None))
        }
        _ => Err("give either --a and --b (Cat map) or --poly (companion map)".into()),
    }
}

fn enumerate(args: &MapArgs, budget: u64, fmt: Format) -> Result<Done, String> {
    let (map, _) = build_map(args)?;
    let mm = map.at(args.k).map_err(lib)?;
    if fmt == Format::Dot {
        let n = mm.state_count().map_err(lib)?;
        if n > DOT_LIMIT {
            return Err(format!("DOT export is limited to {DOT_LIMIT} states; this graph has {n}"));
        }
        return Ok(Done { body: render::dot(&mm).map_err(lib)?, pass: true });
    }
    let histogram = mm.enumerate_cycles(budget).map_err(lib)?;
    let r = EnumerateReport { map: map.label().to_string(), p: args.p, k: args.k, dim: map.dim(), histogram };
    emit(&r, fmt, true)
}

fn verify_graph(args: &MapArgs, budget: u64, fmt: Format) -> Result<Done, String> {
    let (map, _) = build_map(args)?;
    let mm = map.at(args.k).map_err(lib)?;
    let histogram = mm.enumerate_cycles(budget).map_err(lib)?;
    let global_period = mm.global_period().map_err(lib)?;
    let lengths_divide_period = histogram.cycles.keys().all(|&t| global_period % t as u128 == 0);
    let (embedding, lift_law) = if args.k >= 2 {
        (
            Some(embedding_check(&map, args.k, budget).map_err(lib)?),
            Some(period_lift_law_sweep(&map, args.k, 1, budget).map_err(lib)?),
        )
    } else {
        (None, None)
    };
    let pass = lengths_divide_period
        && histogram.lcm().map_err(lib)? == global_period
        && embedding.as_ref().is_none_or(|e| e.pass)
        && lift_law.as_ref().is_none_or(|l| l.pass);
    let r = GraphReport { map: map.label().to_string(), p: args.p, k: args.k, histogram, global_period, lengths_divide_period, embedding, lift_law, pass };
    emit(&r, fmt, pass)
}

fn census(p: u64, k: u32, budget: u64, fmt: Format) -> Result<Done, String> {
    use rayon::prelude::*;
    let r: CensusReport = catmap::cat_table_census_with(p, k, budget, |q, f| (0..q).into_par_iter().map(f).collect()).map_err(lib)?;
    let pass = r.pass;
    emit(&r, fmt, pass)
}

fn d_matrix(args: &MapArgs, v: u32, budget: u64, fmt: Format) -> Result<Done, String> {
    let (map, _) = build_map(args)?;
    let d = build_d_matrix(&map, v, budget).map_err(lib)?;
    let recursion = dmatrix_recursion_check(&map, args.k, v, 1, budget).map_err(lib)?;
    let pass = recursion.pass && d.violations.is_empty();
    let r = DMatrixReport { map: map.label().to_string(), p: args.p, v, d, recursion, pass };
    emit(&r, fmt, pass)
}
