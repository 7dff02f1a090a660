mod error;
mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use multiforest::cyclic::{count_good_permutations, det_expansion};
use multiforest::exact::parse_rational;
use multiforest::laws::{self, Grade};
use multiforest::model::{Marginal, MultitypeDegreeSequence, MultitypeForest, OffspringSpec, PathBundle};
use multiforest::oracle::{self, Budget, Enumerated, ForestKind};
use multiforest::sampling::{self, CmgwOptions, RngHandle};

use error::CliError;

#[derive(Parser)]
#[command(name = "multiforest", version, about = "Generate, count and check multitype plane forests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a degree-sequence file and print its summary.
    Validate { path: PathBuf },
    /// Draw random forests.
    Sample {
        #[command(subcommand)]
        sampler: Sampler,
    },
    /// Exact number of forests.
    Count {
        #[command(subcommand)]
        what: CountCmd,
    },
    /// Exact probabilities.
    Law {
        #[command(subcommand)]
        what: LawCmd,
    },
    /// Cross-check formulas against brute force.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum GradeArg {
    Exact,
    Float,
}

impl From<GradeArg> for Grade {
    fn from(g: GradeArg) -> Self {
        match g {
            GradeArg::Exact => Grade::Exact,
            GradeArg::Float => Grade::Float,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Geometric,
    Poisson,
    Bernoulli,
    Tabulated,
}

#[derive(Args)]
struct Family {
    /// Offspring family used for every marginal.
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    /// Comma-separated pmf for `tabulated`, e.g. `1/4,1/2,1/4`.
    #[arg(long)]
    pmf: Option<String>,
    /// Offspring spec file; overrides `--family`.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args)]
struct SampleOpts {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    samples: u64,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads. Output does not depend on this.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Sampler {
    /// Uniform forest with a given degree sequence.
    Gds {
        #[arg(long)]
        ds: PathBuf,
        #[command(flatten)]
        opts: SampleOpts,
    },
    /// Galton–Watson tree conditioned on its size.
    Cgw {
        #[command(flatten)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = sampling::DEFAULT_MAX_TRIALS)]
        max_trials: u64,
        #[command(flatten)]
        opts: SampleOpts,
    },
    /// Galton–Watson tree with size in `n1 ± slack`.
    CgwApprox {
        #[command(flatten)]
        family: Family,
        #[arg(long)]
        n1: usize,
        #[arg(long, default_value_t = 0)]
        slack: usize,
        #[arg(long, default_value_t = sampling::DEFAULT_MAX_TRIALS)]
        max_trials: u64,
        #[command(flatten)]
        opts: SampleOpts,
    },
    /// Multitype Galton–Watson forest conditioned on its type sizes.
    Cmgw {
        #[command(flatten)]
        family: Family,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = sampling::DEFAULT_MAX_TRIALS)]
        max_trials: u64,
        #[arg(long, default_value_t = sampling::DEFAULT_MAX_ACCEPT_TRIALS)]
        max_accept_trials: u64,
        #[command(flatten)]
        opts: SampleOpts,
    },
}

#[derive(Args)]
struct TypeSizes {
    #[arg(long, value_delimiter = ',', required = true)]
    r: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
}

#[derive(Subcommand)]
enum CountCmd {
    Plane(TypeSizes),
    Labeled(TypeSizes),
    Binary(TypeSizes),
    Gds {
        #[arg(long)]
        ds: PathBuf,
    },
}

#[derive(Subcommand)]
enum LawCmd {
    /// P(#types = n) for a forest with root types r.
    Types {
        #[command(flatten)]
        family: Family,
        #[command(flatten)]
        sizes: TypeSizes,
        /// Sum over all degree-sequence indices instead of the product formula.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, value_enum, default_value_t = GradeArg::Exact)]
        grade: GradeArg,
        #[arg(long)]
        json: bool,
    },
    /// P(total size = n) for a 2-type forest with root types r.
    Total {
        #[command(flatten)]
        family: Family,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<usize>,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = GradeArg::Exact)]
        grade: GradeArg,
        #[arg(long)]
        json: bool,
    },
    /// P(k-tree forest has n vertices).
    OtterDwass {
        #[command(flatten)]
        family: Family,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = GradeArg::Exact)]
        grade: GradeArg,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Exact check of the exchangeability hypothesis.
    H2 {
        #[command(flatten)]
        family: Family,
        #[command(flatten)]
        sizes: TypeSizes,
    },
    /// Brute-force good shifts vs det(−K) vs the elementary-forest expansion.
    Cyclic {
        #[arg(long)]
        ds: PathBuf,
    },
    /// Chi-square test of the uniform sampler against the enumerated support.
    Uniformity {
        #[arg(long)]
        ds: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        /// Always take the u-th good shift (a deliberately biased sampler).
        #[arg(long)]
        fixed_u: Option<u64>,
        #[arg(long, default_value_t = 1e-3)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Enumeration size vs closed-form count.
    Enumeration {
        #[arg(long, conflicts_with_all = ["kind", "r", "n"])]
        ds: Option<PathBuf>,
        #[arg(long, requires_all = ["r", "n"])]
        kind: Option<String>,
        #[arg(long, value_delimiter = ',')]
        r: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
    },
}

fn rational_arg(name: &str, v: &Option<String>) -> Result<num_rational::BigRational, CliError> {
    let text = v.as_deref().ok_or_else(|| CliError::Invalid(format!("--{} is required for this family", name)))?;
    parse_rational(text).ok_or_else(|| CliError::Invalid(format!("--{} {:?} is not a number", name, text)))
}

impl Family {
    fn marginal(&self) -> Result<Marginal, CliError> {
        let family = self.family.ok_or_else(|| CliError::Invalid("--family is required".into()))?;
        let m = match family {
            FamilyArg::Geometric => Marginal::geometric(rational_arg("p", &self.p)?),
            FamilyArg::Bernoulli => Marginal::bernoulli(rational_arg("p", &self.p)?),
            FamilyArg::Poisson => Marginal::poisson(rational_arg("mu", &self.mu)?),
            FamilyArg::Tabulated => {
                let text = self.pmf.as_deref().ok_or_else(|| CliError::Invalid("--pmf is required".into()))?;
                let pmf = text
                    .split(',')
                    .map(|t| parse_rational(t).ok_or_else(|| CliError::Invalid(format!("bad pmf entry {:?}", t))))
                    .collect::<Result<Vec<_>, _>>()?;
                Marginal::tabulated(pmf)
            }
        };
        Ok(m?)
    }

    fn unitype(&self) -> Result<Marginal, CliError> {
        if self.spec.is_some() {
            return Err(CliError::Invalid("this command takes a single offspring law, not --spec".into()));
        }
        self.marginal()
    }

    fn spec(&self, d: usize) -> Result<OffspringSpec, CliError> {
        match &self.spec {
            Some(path) => {
                let spec = OffspringSpec::from_json(&read(path)?)?;
                if spec.d() != d {
                    return Err(CliError::Invalid(format!("spec has d = {} but {} types were given", spec.d(), d)));
                }
                Ok(spec)
            }
            None => Ok(OffspringSpec::uniform(d, self.marginal()?)?),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {}", path.display(), e)))
}

fn load_ds(path: &Path) -> Result<MultitypeDegreeSequence, CliError> {
    Ok(MultitypeDegreeSequence::from_json(&read(path)?)?)
}

fn tuple(v: &[usize]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn matrix(k: &[Vec<i64>]) -> String {
    let rows: Vec<String> =
        k.iter().map(|row| format!("[{}]", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))).collect();
    format!("[{}]", rows.join(","))
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Invalid(format!("thread pool: {}", e)))
}

/// Draw `count` values, sample `i` from stream `i` of `seed`, in index order.
fn draw<T, F>(seed: u64, count: u64, jobs: usize, f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(&mut RngHandle) -> Result<T, CliError> + Sync,
{
    let base = RngHandle::new(seed);
    let one = |i: u64| f(&mut base.derive(i));
    if jobs <= 1 {
        (0..count).map(one).collect()
    } else {
        pool(jobs)?.install(|| (0..count).into_par_iter().map(one).collect())
    }
}

fn emit_forests(forests: &[MultitypeForest], opts: &SampleOpts) -> Result<(), CliError> {
    let mut text = String::new();
    for (i, f) in forests.iter().enumerate() {
        match opts.format {
            Format::Json => text.push_str(&render::json_line(f)),
            Format::Dot => text.push_str(&render::dot(f, &format!("forest_{}", i))),
        }
    }
    match &opts.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_validate(path: &Path) -> Result<(), CliError> {
    let ds = load_ds(path)?;
    let s = ds.validate().map_err(|e| CliError::Invalid(e.to_string()))?;
    println!("valid");
    println!("d={}", ds.d());
    println!("r={}", tuple(ds.roots()));
    println!("n={}", tuple(&s.n));
    println!("K={}", matrix(&s.k));
    println!("det={}", s.det);
    println!("uniform_sampling={}", s.qualifications.uniform_sampling);
    println!("population_law={}", s.qualifications.population_law);
    println!("conditioned_sampling={}", s.qualifications.conditioned_sampling);
    Ok(())
}

fn cmd_sample(sampler: Sampler) -> Result<(), CliError> {
    let (forests, opts) = match sampler {
        Sampler::Gds { ds, opts } => {
            let ds = load_ds(&ds)?;
            ds.validate().map_err(|e| CliError::Invalid(e.to_string()))?;
            let out = draw(opts.seed, opts.samples, opts.jobs, |rng| {
                Ok(sampling::sample_uniform_multitype_forest_gds(&ds, rng)?)
            })?;
            (out, opts)
        }
        Sampler::Cgw { family, n, max_trials, opts } => {
            let nu = family.unitype()?;
            let out = draw(opts.seed, opts.samples, opts.jobs, |rng| {
                Ok(sampling::sample_cgw_devroye(&nu, n, max_trials, rng)?.0)
            })?;
            (out, opts)
        }
        Sampler::CgwApprox { family, n1, slack, max_trials, opts } => {
            let nu = family.unitype()?;
            let out = draw(opts.seed, opts.samples, opts.jobs, |rng| {
                Ok(sampling::sample_cgw_approx(&nu, n1, slack, max_trials, rng)?.0)
            })?;
            (out, opts)
        }
        Sampler::Cmgw { family, r, n, max_trials, max_accept_trials, opts } => {
            let spec = family.spec(r.len())?;
            let cfg = CmgwOptions { max_trials, max_accept_trials };
            let out = draw(opts.seed, opts.samples, opts.jobs, |rng| {
                Ok(sampling::sample_cmgw(&spec, &r, &n, cfg, rng)?.0)
            })?;
            (out, opts)
        }
    };
    emit_forests(&forests, &opts)
}

fn cmd_count(what: CountCmd) -> Result<(), CliError> {
    let value = match what {
        CountCmd::Plane(t) => laws::count_plane(&t.r, &t.n)?,
        CountCmd::Labeled(t) => laws::count_labeled(&t.r, &t.n)?,
        CountCmd::Binary(t) => laws::count_binary(&t.r, &t.n)?,
        CountCmd::Gds { ds } => laws::count_forests_gds(&load_ds(&ds)?)?,
    };
    println!("{}", value);
    Ok(())
}

fn print_law(result: &laws::LawResult, json: bool) {
    for w in &result.warnings {
        eprintln!("warning: {}", w);
    }
    if json {
        println!("{}", result.to_json_value());
    } else {
        println!("{}", result);
    }
}

fn cmd_law(what: LawCmd) -> Result<(), CliError> {
    match what {
        LawCmd::Types { family, sizes, exhaustive, grade, json } => {
            let spec = family.spec(sizes.r.len())?;
            let result = if exhaustive {
                laws::law_population_exhaustive(&spec, &sizes.r, &sizes.n, grade.into(), laws::DEFAULT_INDEX_BUDGET)?
            } else {
                laws::law_population_by_types(&spec, &sizes.r, &sizes.n, grade.into())?
            };
            print_law(&result, json);
        }
        LawCmd::Total { family, r, n, grade, json } => {
            let spec = family.spec(r.len())?;
            print_law(&laws::law_total_population_d2(&spec, &r, n, grade.into())?, json);
        }
        LawCmd::OtterDwass { family, k, n, grade, json } => {
            print_law(&laws::otter_dwass(&family.unitype()?, k, n, grade.into())?, json);
        }
    }
    Ok(())
}

/// Bridge whose increments are the sorted child sequences minus the diagonal.
fn canonical_bridge(ds: &MultitypeDegreeSequence) -> Result<PathBundle, CliError> {
    let d = ds.d();
    let seqs = ds.child_sequence();
    let inc = (0..d)
        .map(|i| (0..d).map(|j| seqs.get(i, j).iter().map(|&c| c as i64 - i64::from(i == j)).collect()).collect())
        .collect();
    PathBundle::new(inc).map_err(|e| CliError::Invalid(e.to_string()))
}

fn verdict(ok: bool, what: String) -> Result<(), CliError> {
    if ok {
        println!("{} pass", what);
        Ok(())
    } else {
        println!("{} fail", what);
        Err(CliError::Failed(what))
    }
}

fn cmd_verify(what: VerifyCmd) -> Result<(), CliError> {
    match what {
        VerifyCmd::H2 { family, sizes } => {
            let spec = family.spec(sizes.r.len())?;
            let report = laws::verify_h2(&spec, &sizes.n, &sizes.r)?;
            for c in &report.checks {
                println!(
                    "i={} j={}: {} {} {}",
                    c.i + 1,
                    c.j + 1,
                    c.lhs,
                    if c.equal { "==" } else { "!=" },
                    c.rhs
                );
            }
            verdict(report.holds, format!("H2 at r={} n={}", tuple(&sizes.r), tuple(&sizes.n)))
        }
        VerifyCmd::Cyclic { ds } => {
            let ds = load_ds(&ds)?;
            let s = ds.validate().map_err(|e| CliError::Invalid(e.to_string()))?;
            let bridge = canonical_bridge(&ds)?;
            let brute = oracle::brute_count_good_perms(ds.roots(), &bridge, Budget::from_env())?;
            let det = count_good_permutations(&s.k, Some(ds.roots()))?;
            let expansion = det_expansion(&s.k, ds.roots())?;
            let ok = det == expansion && det == brute.into();
            verdict(ok, format!("{} == {} == {}", brute, det, expansion))
        }
        VerifyCmd::Uniformity { ds, samples, seed, fixed_u, alpha, jobs } => {
            let ds = load_ds(&ds)?;
            let support = oracle::enumerate_forests_gds(&ds, Budget::from_env())?;
            let drawn = draw(seed, samples, jobs, |rng| {
                Ok(match fixed_u {
                    Some(u) => sampling::sample_multitype_forest_gds_fixed_u(&ds, u, rng)?,
                    None => sampling::sample_uniform_multitype_forest_gds(&ds, rng)?,
                })
            })?;
            let report = oracle::chi_square_uniformity(&drawn, &support)?;
            println!("{}", report.to_json());
            verdict(report.passes(alpha), format!("p = {:.6e} vs alpha = {:e}:", report.p_value, alpha))
        }
        VerifyCmd::Enumeration { ds, kind, r, n } => {
            let budget = Budget::from_env();
            let (found, expected) = match (ds, kind) {
                (Some(path), _) => {
                    let ds = load_ds(&path)?;
                    let forests = oracle::enumerate_forests_gds(&ds, budget)?;
                    let roundtrip = forests.iter().all(|f| {
                        multiforest::codec::decode_multitype(&multiforest::codec::encode_multitype(f), ds.roots())
                            .is_ok_and(|g| &g == f)
                    });
                    if !roundtrip {
                        return Err(CliError::Failed("codec round trip".into()));
                    }
                    (forests.len(), laws::count_forests_gds(&ds)?)
                }
                (None, Some(kind)) => {
                    let kind: ForestKind = kind.parse().map_err(CliError::Invalid)?;
                    let expected = match kind {
                        ForestKind::Plane => laws::count_plane(&r, &n)?,
                        ForestKind::Labeled => laws::count_labeled(&r, &n)?,
                        ForestKind::Binary => laws::count_binary(&r, &n)?,
                    };
                    let found: Enumerated = oracle::enumerate_forests_by_type(&r, &n, kind, budget)?;
                    (found.len(), expected)
                }
                (None, None) => return Err(CliError::Invalid("give --ds or --kind with --r and --n".into())),
            };
            verdict(expected == found.into(), format!("{} == {}", found, expected))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Sample { sampler } => cmd_sample(sampler),
        Command::Count { what } => cmd_count(what),
        Command::Law { what } => cmd_law(what),
        Command::Verify { what } => cmd_verify(what),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
