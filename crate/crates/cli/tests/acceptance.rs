//! One line per acceptance criterion. Run with `cargo test --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use multiforest::codec::{decode_multitype, encode_multitype};
use multiforest::cyclic::{count_good_permutations, det_expansion};
use multiforest::exact::{binomial, ratio, Exact};
use multiforest::laws::{self, Grade, LawError};
use multiforest::model::{Marginal, MultitypeDegreeSequence, MultitypeForest, OffspringSpec};
use multiforest::oracle::{self, Budget, Enumerated, ForestKind};
use multiforest::sampling::{self, CmgwOptions, RngHandle};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn geo(num: i64, den: i64) -> Marginal {
    Marginal::geometric(ratio(num, den)).unwrap()
}

fn families() -> Vec<(&'static str, Marginal)> {
    vec![
        ("geometric(1/2)", geo(1, 2)),
        ("poisson(1)", Marginal::poisson(ratio(1, 1)).unwrap()),
        ("bernoulli(1/2)", Marginal::bernoulli(ratio(1, 2)).unwrap()),
    ]
}

fn ds(r: Vec<usize>, tables: Vec<Vec<Vec<usize>>>) -> MultitypeDegreeSequence {
    MultitypeDegreeSequence::new(r, tables).unwrap()
}

fn ten_vertex() -> MultitypeDegreeSequence {
    ds(vec![1, 0], vec![vec![vec![4, 1, 1], vec![3, 3]], vec![vec![3, 0, 1], vec![3, 1]]])
}

fn toy2() -> MultitypeDegreeSequence {
    ds(vec![1, 0], vec![vec![vec![1, 1], vec![1, 1]], vec![vec![1], vec![1]]])
}

/// `∏_v ∏_j ν_{t(v),j}(k_j(v))`, the Galton–Watson weight of one forest.
fn forest_weight(spec: &OffspringSpec, f: &MultitypeForest) -> Exact {
    let mut w = Exact::one();
    for v in 0..f.len() {
        for (j, k) in f.child_counts(v).into_iter().enumerate() {
            w = w.mul(&spec.marginal(f.ty(v), j).pmf::<Exact>(k));
        }
    }
    w
}

fn total_weight(spec: &OffspringSpec, forests: &[MultitypeForest]) -> Exact {
    forests.iter().fold(Exact::zero(), |acc, f| acc.add(&forest_weight(spec, f)))
}

fn plane(r: &[usize], n: &[usize]) -> Vec<MultitypeForest> {
    match oracle::enumerate_forests_by_type(r, n, ForestKind::Plane, Budget(1_000_000)).unwrap() {
        Enumerated::Plane(v) => v,
        Enumerated::Labeled(_) => unreachable!(),
    }
}

/// Random forest with every one of `d` types present.
fn random_forest(rng: &mut RngHandle, d: usize, size: usize) -> MultitypeForest {
    let mut types: Vec<usize> = (0..size).map(|v| if v < d { v } else { rng.gen_range(0..d) }).collect();
    for v in (1..size).rev() {
        types.swap(v, rng.gen_range(0..=v));
    }
    let parents: Vec<Option<usize>> =
        (0..size).map(|v| if v == 0 || rng.gen_bool(0.15) { None } else { Some(rng.gen_range(0..v)) }).collect();
    MultitypeForest::from_parents(d, types, &parents).unwrap()
}

fn c1_cyclic_triple() -> Outcome {
    let mut rng = RngHandle::new(2024);
    let mut done = 0;
    let mut largest = 0;
    while done < 200 {
        let d = rng.gen_range(1..=3);
        let size = rng.gen_range(d..=45);
        let f = random_forest(&mut rng, d, size);
        let ds = f.empirical_degree_sequence();
        let n = ds.type_sizes();
        let prod: usize = n.iter().product();
        if prod > 5000 {
            continue;
        }
        largest = largest.max(prod);
        let s = ds.validate().map_err(|e| e.to_string())?;
        let bridge = sampling::shuffled_bridge(&ds, &mut rng);
        let brute = oracle::brute_count_good_perms(ds.roots(), &bridge, Budget(10_000)).map_err(|e| e.to_string())?;
        let cyc = count_good_permutations(&s.k, Some(ds.roots())).map_err(|e| e.to_string())?;
        let exp = det_expansion(&s.k, ds.roots()).map_err(|e| e.to_string())?;
        ensure!(
            BigInt::from(brute) == s.det && cyc == s.det && exp == s.det,
            "{}: brute {} det {} count {} expansion {}",
            ds,
            brute,
            s.det,
            cyc,
            exp
        );
        done += 1;
    }
    Ok(format!("{} instances, largest ∏n_i = {}", done, largest))
}

fn c2_ten_vertex() -> Outcome {
    let ds = ten_vertex();
    let s = ds.validate().map_err(|e| e.to_string())?;
    ensure!(s.n == vec![6, 4], "n = {:?}", s.n);
    ensure!(ds.roots() == [1, 0], "r = {:?}", ds.roots());
    ensure!(s.k == vec![vec![-3, 3], vec![2, -3]], "K = {:?}", s.k);
    ensure!(s.det == BigInt::from(3), "det = {}", s.det);
    let count = laws::count_forests_gds(&ds).map_err(|e| e.to_string())?;
    ensure!(count == BigInt::from(1200), "count = {}", count);
    let forests = oracle::enumerate_forests_gds(&ds, Budget::default()).map_err(|e| e.to_string())?;
    ensure!(forests.len() == 1200, "enumerated {}", forests.len());
    let distinct: std::collections::HashSet<_> = forests.iter().collect();
    ensure!(distinct.len() == 1200, "{} distinct", distinct.len());
    for f in &forests {
        ensure!(f.empirical_degree_sequence() == ds, "wrong degree sequence {}", f.canonical_code());
        let back = decode_multitype(&encode_multitype(f), ds.roots()).map_err(|e| e.to_string())?;
        ensure!(&back == f, "round trip failed for {}", f.canonical_code());
    }
    Ok("n=(6,4) r=(1,0) K=[[-3,3],[2,-3]] det=3, count 1200, 1200 distinct forests round-trip".into())
}

fn uniformity_p(ds: &MultitypeDegreeSequence, samples: usize, seed: u64, fixed_u: Option<u64>) -> Result<f64, String> {
    let support = oracle::enumerate_forests_gds(ds, Budget::default()).map_err(|e| e.to_string())?;
    let mut rng = RngHandle::new(seed);
    let drawn: Vec<MultitypeForest> = (0..samples)
        .map(|_| match fixed_u {
            Some(u) => sampling::sample_multitype_forest_gds_fixed_u(ds, u, &mut rng),
            None => sampling::sample_uniform_multitype_forest_gds(ds, &mut rng),
        })
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    Ok(oracle::chi_square_uniformity(&drawn, &support).map_err(|e| e.to_string())?.p_value)
}

fn c3_uniformity() -> Outcome {
    let instances = [("toy", toy2(), 10_000),
        ("d=1 [2,1,1]", ds(vec![1], vec![vec![vec![2, 1, 1]]]), 30_000),
        ("d=1 m=2 [3,1,1]", ds(vec![2], vec![vec![vec![3, 1, 1]]]), 30_000),
        ("d=2 det 1", ds(vec![1, 0], vec![vec![vec![2, 0, 1], vec![2, 1]], vec![vec![1], vec![1]]]), 30_000),
        ("d=2 det 3", ds(vec![1, 1], vec![vec![vec![2, 1], vec![2, 1]], vec![vec![1, 1], vec![2]]]), 50_000)];
    let mut parts = Vec::new();
    let mut mid = 0;
    for (idx, (name, ds, samples)) in instances.iter().enumerate() {
        let size = laws::count_forests_gds(ds).map_err(|e| e.to_string())?;
        if (BigInt::from(3)..=BigInt::from(50)).contains(&size) {
            mid += 1;
        }
        let p = uniformity_p(ds, *samples, 300 + idx as u64, None)?;
        ensure!(p > 1e-3, "{} (support {}): p = {:.3e}", name, size, p);
        parts.push(format!("{}:{}:p={:.3}", name, size, p));
    }
    ensure!(mid >= 3, "only {} instances with support 3–50", mid);
    let neg = uniformity_p(&instances[4].1, 50_000, 99, Some(1))?;
    ensure!(neg < 1e-6, "fixed-u control p = {:.3e}", neg);
    let neg_ten = uniformity_p(&ten_vertex(), 100_000, 98, Some(1))?;
    ensure!(neg_ten < 1e-6, "fixed-u control on the ten-vertex instance p = {:.3e}", neg_ten);
    Ok(format!("{}; fixed u=1 p={:.1e}, {:.1e}", parts.join(" "), neg, neg_ten))
}

fn c4_otter_dwass() -> Outcome {
    let mut checked = 0;
    for (name, nu) in families() {
        let spec = OffspringSpec::uniform(1, nu.clone()).unwrap();
        for n in 1..=8 {
            for k in 1..=n {
                let law = laws::otter_dwass(&nu, k, n, Grade::Exact).map_err(|e| e.to_string())?;
                let oracle = total_weight(&spec, &plane(&[k], &[n]));
                ensure!(law.exact_value() == &oracle, "{} k={} n={}: {} vs {}", name, k, n, law.exact_value(), oracle);
                checked += 1;
            }
        }
    }
    Ok(format!("{} (family, k, n) triples exact", checked))
}

/// `(r/n) ∏ C(n + n_i − r_i − 1, n_i − r_i) p^{2n} (1 − p)^{n − r}` for d = 2.
fn geometric_closed_form(p: &BigRational, r: &[usize], n: &[usize]) -> BigRational {
    let rt: usize = r.iter().sum();
    let nt: usize = n.iter().sum();
    let mut v = ratio(rt as i64, nt as i64);
    for i in 0..2 {
        v *= BigRational::from_integer(binomial((nt + n[i] - r[i] - 1) as u64, (n[i] - r[i]) as u64));
    }
    let one = ratio(1, 1);
    v * num_traits::pow(p.clone(), 2 * nt) * num_traits::pow(one - p, nt - rt)
}

fn c5_population_by_types() -> Outcome {
    let mut checked = 0;
    let mut skipped = 0;
    let mut oracle_checked = 0;
    let mut boundary_checked = 0;
    for (name, nu) in families() {
        let spec = OffspringSpec::uniform(2, nu.clone()).unwrap();
        for n1 in 1..=4 {
            for n2 in 1..=4 {
                for r1 in 0..=n1 {
                    for r2 in 0..=n2 {
                        if r1 + r2 == 0 {
                            continue;
                        }
                        let (r, n) = ([r1, r2], [n1, n2]);
                        let by = match laws::law_population_by_types(&spec, &r, &n, Grade::Exact) {
                            Ok(v) => v,
                            Err(LawError::Precondition(_)) => {
                                // Some r_i = n_i: outside the product formula, so
                                // check the exhaustive sum against enumeration only.
                                if n1 + n2 <= 6 {
                                    let ex = laws::law_population_exhaustive(&spec, &r, &n, Grade::Exact, 1_000_000)
                                        .map_err(|e| e.to_string())?;
                                    let o = total_weight(&spec, &plane(&r, &n));
                                    ensure!(&o == ex.exact_value(), "{} boundary r={:?} n={:?}", name, r, n);
                                    boundary_checked += 1;
                                }
                                skipped += 1;
                                continue;
                            }
                            Err(e) => return Err(e.to_string()),
                        };
                        let ex = laws::law_population_exhaustive(&spec, &r, &n, Grade::Exact, 1_000_000)
                            .map_err(|e| e.to_string())?;
                        ensure!(by.exact_value() == ex.exact_value(), "{} r={:?} n={:?}", name, r, n);
                        if name.starts_with("geometric") {
                            let cf = geometric_closed_form(&ratio(1, 2), &r, &n);
                            ensure!(by.rational() == Some(cf.clone()), "closed form r={:?} n={:?}: {}", r, n, cf);
                        }
                        if n1 + n2 <= 6 {
                            let o = total_weight(&spec, &plane(&r, &n));
                            ensure!(&o == by.exact_value(), "{} r={:?} n={:?}: oracle {}", name, r, n, o);
                            oracle_checked += 1;
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    let spec = OffspringSpec::uniform(2, geo(1, 2)).unwrap();
    let worked = laws::law_population_by_types(&spec, &[1, 1], &[2, 2], Grade::Exact).map_err(|e| e.to_string())?;
    ensure!(worked.rational() == Some(ratio(1, 128)), "worked value {}", worked.exact_value());
    Ok(format!(
        "{} points equal ({} also by enumeration); {} points with some r_i = n_i, {} of them exhaustive = enumeration; worked value 1/128",
        checked, oracle_checked, skipped, boundary_checked
    ))
}

fn c6_enumeration_formulas() -> Outcome {
    let mut cases: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for n in 1..=6usize {
        for r in 1..=n {
            cases.push((vec![r], vec![n]));
        }
    }
    for n1 in 1..=5usize {
        for n2 in 1..=(6 - n1) {
            for r1 in 0..=n1 {
                for r2 in 0..=n2 {
                    if r1 + r2 > 0 {
                        cases.push((vec![r1, r2], vec![n1, n2]));
                    }
                }
            }
        }
    }
    let mut checked = [0usize; 3];
    for (r, n) in &cases {
        for (slot, kind) in [ForestKind::Plane, ForestKind::Labeled, ForestKind::Binary].into_iter().enumerate() {
            let formula = match kind {
                ForestKind::Plane => laws::count_plane(r, n),
                ForestKind::Labeled => laws::count_labeled(r, n),
                ForestKind::Binary => laws::count_binary(r, n),
            };
            let formula = match formula {
                Ok(v) => v,
                Err(LawError::Precondition(_)) => continue,
                Err(e) => return Err(format!("{:?} r={:?} n={:?}: {}", kind, r, n, e)),
            };
            let found = oracle::enumerate_forests_by_type(r, n, kind, Budget(1_000_000)).map_err(|e| e.to_string())?;
            ensure!(BigInt::from(found.len()) == formula, "{:?} r={:?} n={:?}: {} vs {}", kind, r, n, found.len(), formula);
            checked[slot] += 1;
        }
    }
    let cayley = laws::count_labeled(&[1], &[3]).map_err(|e| e.to_string())?;
    let bin = laws::count_binary(&[1], &[3]).map_err(|e| e.to_string())?;
    ensure!(cayley == BigInt::from(3) && bin == BigInt::from(1), "labeled {} binary {}", cayley, bin);
    Ok(format!("plane {}, labeled {}, binary {} instances match", checked[0], checked[1], checked[2]))
}

fn c7_h2() -> Outcome {
    let mut points: Vec<(String, Marginal, Vec<usize>, Vec<usize>)> = families()
        .into_iter()
        .map(|(name, m)| (name.to_string(), m, vec![1, 1], vec![3, 2]))
        .collect();
    let more = [
        ("geometric(1/3)", geo(1, 3), [1, 1], [2, 2]),
        ("geometric(2/3)", geo(2, 3), [1, 2], [4, 3]),
        ("geometric(1/2)", geo(1, 2), [2, 1], [4, 4]),
        ("poisson(1/2)", Marginal::poisson(ratio(1, 2)).unwrap(), [1, 1], [2, 3]),
        ("poisson(2)", Marginal::poisson(ratio(2, 1)).unwrap(), [2, 1], [3, 3]),
        ("poisson(1)", Marginal::poisson(ratio(1, 1)).unwrap(), [1, 0], [3, 2]),
        ("bernoulli(1/3)", Marginal::bernoulli(ratio(1, 3)).unwrap(), [1, 1], [3, 3]),
        ("bernoulli(1/2)", Marginal::bernoulli(ratio(1, 2)).unwrap(), [1, 1], [5, 3]),
        ("tabulated(1/4,1/2,1/4)", Marginal::tabulated(vec![ratio(1, 4), ratio(1, 2), ratio(1, 4)]).unwrap(), [1, 1], [3, 3]),
        ("geometric(1/2)", geo(1, 2), [1, 1], [5, 2]),
    ];
    for (name, m, r, n) in more {
        points.push((name.to_string(), m, r.to_vec(), n.to_vec()));
    }
    for (name, m, r, n) in &points {
        let spec = OffspringSpec::uniform(2, m.clone()).unwrap();
        let rep = laws::verify_h2(&spec, n, r).map_err(|e| e.to_string())?;
        ensure!(rep.holds, "{} r={:?} n={:?} fails", name, r, n);
        ensure!(rep.checks.iter().all(|c| c.lhs == c.rhs), "{} sides differ", name);
    }
    let a = Marginal::tabulated(vec![ratio(1, 2), ratio(1, 2)]).unwrap();
    let b = Marginal::tabulated(vec![ratio(1, 4), ratio(0, 1), ratio(3, 4)]).unwrap();
    let skew = OffspringSpec::new(vec![vec![a.clone(), a], vec![b.clone(), b]]).unwrap();
    let rep = laws::verify_h2(&skew, &[3, 2], &[1, 1]).map_err(|e| e.to_string())?;
    ensure!(!rep.holds, "counterexample satisfies H2");
    Ok(format!("{} parameter points hold exactly; skewed-column counterexample fails", points.len()))
}

fn c8_conditioned_samplers() -> Outcome {
    let nu = geo(1, 2);
    let mut rng = RngHandle::new(808);
    let trees: Vec<MultitypeForest> = (0..10_000)
        .map(|_| sampling::sample_cgw_devroye(&nu, 3, sampling::DEFAULT_MAX_TRIALS, &mut rng).map(|t| t.0))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let support = plane(&[1], &[3]);
    ensure!(support.len() == 2, "{} trees of size 3", support.len());
    let t4 = oracle::chi_square_uniformity(&trees, &support).map_err(|e| e.to_string())?;
    ensure!(t4.p_value > 1e-3, "Devroye sampler p = {:.3e}", t4.p_value);

    let spec = OffspringSpec::uniform(2, nu).unwrap();
    let mut forests = Vec::with_capacity(100_000);
    let mut max_ratio: f64 = 0.0;
    for _ in 0..100_000 {
        let (f, rep) = sampling::sample_cmgw(&spec, &[1, 1], &[2, 2], CmgwOptions::default(), &mut rng)
            .map_err(|e| e.to_string())?;
        max_ratio = max_ratio.max(rep.max_accept_ratio);
        forests.push(f);
    }
    let support = plane(&[1, 1], &[2, 2]);
    ensure!(support.len() == 8, "{} forests with r=(1,1) n=(2,2)", support.len());
    let t8 = oracle::chi_square_uniformity(&forests, &support).map_err(|e| e.to_string())?;
    ensure!(t8.p_value > 1e-3, "CMGW p = {:.3e}", t8.p_value);
    ensure!(max_ratio <= 1.0, "accept ratio {}", max_ratio);
    Ok(format!(
        "size-3 trees {:?} p={:.3}; CMGW uniform over 8 p={:.3}, max accept ratio {:.4}",
        t4.cells.iter().map(|c| c.observed).collect::<Vec<_>>(),
        t4.p_value,
        t8.p_value,
        max_ratio
    ))
}

fn c9_hit_rate() -> Outcome {
    let nu = geo(1, 2);
    let mut rng = RngHandle::new(909);
    let mut parts = Vec::new();
    for n in [3usize, 5, 8] {
        // P(X_n = n − 1) for a sum of n geometric(1/2) variables.
        let q = binomial(2 * n as u64 - 2, n as u64 - 1).to_string().parse::<f64>().unwrap() / 2f64.powi(2 * n as i32 - 1);
        let samples = 20_000;
        let mut trials = 0u64;
        for _ in 0..samples {
            let (_, rep) = sampling::sample_cgw_devroye(&nu, n, sampling::DEFAULT_MAX_TRIALS, &mut rng)
                .map_err(|e| e.to_string())?;
            trials += rep.trials;
        }
        let rate = samples as f64 / trials as f64;
        let sigma = (q * (1.0 - q) / trials as f64).sqrt();
        ensure!((rate - q).abs() <= 3.0 * sigma, "n={}: rate {:.5} vs {:.5} (σ {:.5})", n, rate, q, sigma);
        parts.push(format!("n={} {:.4}/{:.4}", n, rate, q));
    }
    Ok(parts.join(", "))
}

fn c10_total_population() -> Outcome {
    let spec = OffspringSpec::uniform(2, geo(1, 2)).unwrap();
    let r = [1usize, 1];
    let pinned = [(4usize, ratio(9, 512)), (5, ratio(11, 1024)), (6, ratio(455, 65536))];
    let mut parts = Vec::new();
    for (total, expected) in pinned {
        let formula = laws::law_total_population_d2(&spec, &r, total, Grade::Exact).map_err(|e| e.to_string())?;
        let mut direct = Exact::zero();
        for n1 in r[0]..=total - r[1] {
            let part = laws::law_population_exhaustive(&spec, &r, &[n1, total - n1], Grade::Exact, 1_000_000)
                .map_err(|e| e.to_string())?;
            direct = direct.add(part.exact_value());
        }
        ensure!(formula.exact_value() == &direct, "n={}: formula {} vs direct {}", total, formula.exact_value(), direct);
        ensure!(direct.as_rational() == Some(expected.clone()), "n={}: direct {} vs {}", total, direct, expected);
        parts.push(format!("n={} {}", total, direct));
    }
    Ok(parts.join(", "))
}

fn c11_builders() -> Outcome {
    let nu = geo(1, 2);
    let spec = OffspringSpec::uniform(2, geo(2, 3)).unwrap();
    let mut uni = Vec::new();
    let mut multi = Vec::new();
    for a in [100u64, 1_000, 10_000] {
        let base = sampling::build_degree_sequence(&nu, a).map_err(|e| e.to_string())?;
        base.validate().map_err(|e| e.to_string())?;
        let hubs = sampling::hub_sizes_from_scaling(&[1.0, 0.5], base.size() as u64, 1.5);
        let with_hubs = sampling::build_degree_sequence_hubs(&nu, a, &hubs).map_err(|e| e.to_string())?;
        with_hubs.validate().map_err(|e| e.to_string())?;
        let m = sampling::build_multitype_degree_sequence(&spec, a, &[1, 1]).map_err(|e| e.to_string())?;
        m.validate().map_err(|e| e.to_string())?;
        uni.push(oracle::degree_sequence_tv(&base, &nu));
        multi.push(oracle::multitype_degree_sequence_tv(&m, &spec));
    }
    ensure!(uni.windows(2).all(|w| w[1] < w[0]), "unitype TV {:?}", uni);
    ensure!(multi.windows(2).all(|w| w[1] < w[0]), "multitype TV {:?}", multi);
    let mut rng = RngHandle::new(1111);
    let t = oracle::empirical_degree_trend(&nu, &[10, 40, 160], 300, &mut rng).map_err(|e| e.to_string())?;
    ensure!(t.non_increasing, "sampled unitype trend {:?}", t.rows);
    let tm = oracle::empirical_degree_trend_multitype(&spec, &[1, 1], &[vec![6, 6], vec![12, 12]], 300, &mut rng)
        .map_err(|e| e.to_string())?;
    ensure!(tm.non_increasing, "sampled multitype trend {:?}", tm.rows);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{:.4}", x)).collect::<Vec<_>>().join(">");
    Ok(format!(
        "builder TV {} and {}; sampled {} and {}",
        fmt(&uni),
        fmt(&multi),
        fmt(&t.rows.iter().map(|r| r.tv).collect::<Vec<_>>()),
        fmt(&tm.rows.iter().map(|r| r.tv).collect::<Vec<_>>())
    ))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_multiforest")).args(args).output().map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "{:?} exited with {}: {}", args, out.status, String::from_utf8_lossy(&out.stderr));
    Ok(out.stdout)
}

fn c12_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("ten.json");
    std::fs::write(&path, ten_vertex().to_json()).map_err(|e| e.to_string())?;
    let p = path.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["sample", "gds", "--ds", p, "--samples", "20"],
        vec!["sample", "gds", "--ds", p, "--samples", "5", "--format", "dot"],
        vec!["sample", "cgw", "--family", "geometric", "--p", "0.5", "--n", "12", "--samples", "20"],
        vec!["sample", "cgw-approx", "--family", "poisson", "--mu", "1", "--n1", "30", "--slack", "3", "--samples", "20"],
        vec!["sample", "cmgw", "--family", "geometric", "--p", "0.5", "--r", "1,1", "--n", "3,3", "--samples", "20"],
    ];
    for cmd in &commands {
        let with = |seed: &str, jobs: &str| {
            let mut a = cmd.clone();
            a.extend(["--seed", seed, "--jobs", jobs]);
            run_cli(&a)
        };
        let first = with("7", "1")?;
        ensure!(!first.is_empty(), "{:?}: empty output", cmd);
        ensure!(with("7", "1")? == first, "{:?}: same seed differs", cmd);
        ensure!(with("7", "4")? == first, "{:?}: --jobs changes output", cmd);
        ensure!(with("8", "1")? != first, "{:?}: different seeds agree", cmd);
    }
    Ok(format!("{} sample commands byte-identical per seed, distinct across seeds", commands.len()))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome, Option<Duration>)> = vec![
        ("cyclic-lemma triple equality", c1_cyclic_triple, Some(Duration::from_secs(60))),
        ("ten-vertex instance", c2_ten_vertex, Some(Duration::from_secs(120))),
        ("uniformity of the multitype sampler", c3_uniformity, None),
        ("Otter–Dwass formula", c4_otter_dwass, None),
        ("law of population by types", c5_population_by_types, None),
        ("enumeration formulas", c6_enumeration_formulas, None),
        ("H2 verification", c7_h2, None),
        ("conditioned samplers", c8_conditioned_samplers, None),
        ("multinomial hit rate", c9_hit_rate, None),
        ("total-population law (d=2)", c10_total_population, None),
        ("degree-sequence builders", c11_builders, None),
        ("CLI determinism", c12_determinism, None),
    ];
    let mut failed = 0;
    for (idx, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if took > l => Err(format!("took {:.1}s, limit {}s", took.as_secs_f64(), l.as_secs())),
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {:>2} {} {}: {} [{:.1}s]", idx + 1, tag, name, detail, took.as_secs_f64());
        if outcome.is_err() {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{} acceptance criteria failed", failed);
        std::process::exit(1);
    }
    println!("all 12 acceptance criteria passed");
}
