//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::fs::File;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use zonoid_depth::convex::{objective_and_gradient, NullBasis, NullspaceProgram};
use zonoid_depth::data::SampleStream;
use zonoid_depth::linalg::{min_norm_solution, nullspace_basis};
use zonoid_depth::{
    check_nested_convex, contour_levels, generate, in_convex_hull, linspace_levels, load_csv,
    lq_depth, lq_depth_with, mahalanobis_depth, zonoid_depth, ContourConfig, DataCloud, DepthConfig,
    DepthOrder, Matrix, Q2Route, RaySearch, Scenario, ScenarioSpec,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const ORDERS: [DepthOrder; 5] = [
    DepthOrder::Finite(1.0),
    DepthOrder::Finite(2.0),
    DepthOrder::Finite(4.0),
    DepthOrder::Finite(8.0),
    DepthOrder::Infinity,
];

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn depth(cloud: &DataCloud, x: &[f64], order: DepthOrder) -> Result<f64, String> {
    lq_depth(cloud, x, order)
        .map(|r| r.depth)
        .map_err(|e| format!("q={order} at {x:?}: {e}"))
}

fn discrepancy(cloud: &DataCloud, x: &[f64], order: DepthOrder) -> Result<f64, String> {
    lq_depth(cloud, x, order)
        .map(|r| r.discrepancy.unwrap_or(0.0))
        .map_err(|e| format!("q={order} at {x:?}: {e}"))
}

fn random_cloud(stream: &mut SampleStream, n: usize, d: usize) -> DataCloud {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| stream.normal() + 0.3 * stream.symmetric()).collect())
        .collect();
    DataCloud::from_rows(&rows).expect("random cloud is nonsingular")
}

fn max_radius(cloud: &DataCloud) -> f64 {
    let m = cloud.mean();
    (0..cloud.n())
        .map(|i| cloud.point(i).iter().zip(m).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

fn unit_vector(stream: &mut SampleStream, d: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..d).map(|_| stream.normal()).collect();
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

fn along(origin: &[f64], u: &[f64], r: f64) -> Vec<f64> {
    origin.iter().zip(u).map(|(o, v)| o + r * v).collect()
}

fn agrees_with_mahalanobis() -> Outcome {
    let start = Instant::now();
    let cfg = DepthConfig {
        q2: Q2Route::ConvexEngine,
        ..DepthConfig::default()
    };
    let mut worst = 0.0_f64;
    for c in 0..10 {
        let d = 2 + c % 2;
        let mut stream = SampleStream::new(100 + c as u64);
        let cloud = random_cloud(&mut stream, 50, d);
        let reach = max_radius(&cloud);
        for k in 0..20 {
            let u = unit_vector(&mut stream, d);
            let r = if k % 2 == 0 {
                0.3 * reach * stream.unit()
            } else {
                reach * (1.05 + 2.0 * stream.unit())
            };
            let x = along(cloud.mean(), &u, r);
            if k % 2 == 1 {
                check(!in_convex_hull(&cloud, &x).map_err(|e| e.to_string())?, || {
                    format!("probe {x:?} should lie outside the hull")
                })?;
            }
            let md = mahalanobis_depth(&cloud, &x).map_err(|e| e.to_string())?.depth;
            let ld = lq_depth_with(&cloud, &x, DepthOrder::Finite(2.0), &cfg)
                .map_err(|e| e.to_string())?
                .depth;
            worst = worst.max((ld - md).abs());
        }
    }
    let elapsed = start.elapsed();
    check(worst <= 1e-6, || format!("max |LD2 - MD| = {worst:e}"))?;
    check(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("max |LD2 - MD| = {worst:.1e}, {elapsed:.2?}"))
}

fn exact_values() -> Outcome {
    let pair = DataCloud::from_rows(&[[0.0], [1.0]]).map_err(|e| e.to_string())?;
    for order in [
        DepthOrder::Finite(1.0),
        DepthOrder::Finite(2.0),
        DepthOrder::Finite(4.0),
        DepthOrder::Infinity,
    ] {
        let d = depth(&pair, &[2.0], order)?;
        check((d - 0.25).abs() <= 1e-9, || format!("{{0,1}}, x=2, q={order}: {d}"))?;
    }
    let triple = DataCloud::from_rows(&[[0.0], [1.0], [2.0]]).map_err(|e| e.to_string())?;
    let expected = [
        (DepthOrder::Finite(1.0), 2.0 / 3.0),
        (DepthOrder::Infinity, 4.0 / 7.0),
        (DepthOrder::Finite(2.0), 1.0 / (1.0 + 0.375_f64.sqrt())),
    ];
    for (order, want) in expected {
        let d = depth(&triple, &[1.5], order)?;
        check((d - want).abs() <= 1e-6, || format!("{{0,1,2}}, x=1.5, q={order}: {d} vs {want}"))?;
    }
    let zd = zonoid_depth(&triple, &[1.5]).map_err(|e| e.to_string())?.depth;
    check((zd - 2.0 / 3.0).abs() <= 1e-6, || format!("ZD = {zd}"))?;
    Ok("singleton hyperplane and one-parameter family match".into())
}

/// Nonsingular 2x2 transform with condition number at most 100.
fn random_transform(stream: &mut SampleStream) -> (Matrix, Vec<f64>) {
    let (a, b) = (std::f64::consts::PI * stream.symmetric(), std::f64::consts::PI * stream.symmetric());
    let s1 = 10f64.powf(stream.symmetric());
    let s2 = if stream.unit() < 0.5 { -1.0 } else { 1.0 } * 10f64.powf(stream.symmetric());
    let (ca, sa, cb, sb) = (a.cos(), a.sin(), b.cos(), b.sin());
    // R(a) diag(s1, s2) R(b)
    let m = Matrix::new(
        2,
        2,
        vec![
            ca * s1 * cb - sa * s2 * sb,
            -ca * s1 * sb - sa * s2 * cb,
            sa * s1 * cb + ca * s2 * sb,
            -sa * s1 * sb + ca * s2 * cb,
        ],
    )
    .expect("finite transform");
    (m, vec![5.0 * stream.symmetric(), 5.0 * stream.symmetric()])
}

fn depth_axioms() -> Outcome {
    let mut stream = SampleStream::new(7);
    let cloud = generate(ScenarioSpec {
        kind: Scenario::S3,
        n: 100,
        seed: 11,
    })
    .map_err(|e| e.to_string())?;
    let reach = max_radius(&cloud);
    let mut worst_affine = 0.0_f64;
    for _ in 0..20 {
        let (a, b) = random_transform(&mut stream);
        let moved = cloud.transformed(&a, &b).map_err(|e| e.to_string())?;
        for _ in 0..3 {
            let u = unit_vector(&mut stream, 2);
            let x = along(cloud.mean(), &u, 1.5 * reach * stream.unit());
            let mut y = a.matvec(&x).map_err(|e| e.to_string())?;
            y[0] += b[0];
            y[1] += b[1];
            for order in ORDERS {
                let gap = (depth(&cloud, &x, order)? - depth(&moved, &y, order)?).abs();
                worst_affine = worst_affine.max(gap);
            }
        }
    }
    check(worst_affine <= 1e-5, || format!("P1: affine gap {worst_affine:e}"))?;

    for order in ORDERS {
        let at_mean = depth(&cloud, cloud.mean(), order)?;
        check(at_mean == 1.0, || format!("P2: depth at mean is {at_mean} for q={order}"))?;
    }

    let mut farthest = 0.0_f64;
    for ray in 0..50 {
        let angle = 2.0 * std::f64::consts::PI * ray as f64 / 50.0;
        let u = [angle.cos(), angle.sin()];
        for order in ORDERS {
            let mut last = 1.0;
            for k in 0..20 {
                let r = 2.0 * reach * k as f64 / 19.0;
                let d = depth(&cloud, &along(cloud.mean(), &u, r), order)?;
                check(d <= last + 1e-7, || format!("P3: q={order} ray {ray} radius {r}: {d} > {last}"))?;
                last = d;
            }
            let mut r = reach;
            let mut doublings = 0;
            while depth(&cloud, &along(cloud.mean(), &u, r), order)? >= 0.01 {
                r *= 2.0;
                doublings += 1;
                check(doublings <= 60, || format!("P4: q={order} ray {ray} never drops below 0.01"))?;
            }
            farthest = farthest.max(r / reach);
        }
    }
    Ok(format!(
        "affine gap {worst_affine:.1e}; depth(mean) = 1; 50x20 rays monotone; below 0.01 by {farthest} x hull radius"
    ))
}

fn monotonicity_and_sandwich() -> Outcome {
    let mut stream = SampleStream::new(3);
    let cloud = random_cloud(&mut stream, 100, 2);
    let reach = max_radius(&cloud);
    let n = cloud.n() as f64;
    for k in 0..100 {
        let u = unit_vector(&mut stream, 2);
        let x = along(cloud.mean(), &u, 2.0 * reach * stream.unit());
        let depths = ORDERS.iter().map(|&o| depth(&cloud, &x, o)).collect::<Result<Vec<_>, _>>()?;
        for w in depths.windows(2) {
            check(w[0] >= w[1] - 1e-7, || format!("point {k}: depths not ordered {depths:?}"))?;
        }
        let s_inf = discrepancy(&cloud, &x, DepthOrder::Infinity)?;
        for q in [1.0, 2.0, 4.0, 8.0] {
            let sq = discrepancy(&cloud, &x, DepthOrder::Finite(q))?;
            check(sq <= s_inf + 1e-7 && s_inf <= n.powf(1.0 / q) * sq + 1e-7, || {
                format!("point {k}: S_{q} = {sq}, S_inf = {s_inf}")
            })?;
        }
    }
    Ok("100 points ordered and sandwiched".into())
}

fn outside_problem() -> Outcome {
    let cloud = generate(ScenarioSpec {
        kind: Scenario::S2,
        n: 200,
        seed: 5,
    })
    .map_err(|e| e.to_string())?;
    let mut stream = SampleStream::new(55);
    let reach = max_radius(&cloud);
    let mut smallest = f64::INFINITY;
    for _ in 0..50 {
        let u = unit_vector(&mut stream, 2);
        let x = along(cloud.mean(), &u, reach * (1.01 + 3.0 * stream.unit()));
        check(!in_convex_hull(&cloud, &x).map_err(|e| e.to_string())?, || format!("{x:?} is inside"))?;
        let zd = zonoid_depth(&cloud, &x).map_err(|e| e.to_string())?.depth;
        check(zd == 0.0, || format!("zonoid depth {zd} at {x:?}"))?;
        for order in ORDERS {
            let d = depth(&cloud, &x, order)?;
            check(d > 0.0, || format!("q={order} depth {d} at {x:?}"))?;
            smallest = smallest.min(d);
        }
    }
    Ok(format!("zonoid depth 0 at 50 outside points, min LD_q = {smallest:.3}"))
}

fn monte_carlo() -> Outcome {
    let queries: [[f64; 2]; 3] = [[0.5, 0.0], [1.0, 1.0], [3.0, 0.0]];
    let mut maes = Vec::new();
    for (i, n) in [100usize, 1000, 10000].into_iter().enumerate() {
        let mut total = 0.0;
        for rep in 0..50 {
            let seed = 10_000 * (i as u64 + 1) + rep;
            let cloud = generate(ScenarioSpec {
                kind: Scenario::S2,
                n,
                seed,
            })
            .map_err(|e| e.to_string())?;
            for x in &queries {
                let population = 1.0 / (1.0 + x[0].hypot(x[1]));
                total += (depth(&cloud, x, DepthOrder::Finite(2.0))? - population).abs();
            }
        }
        maes.push(total / (50.0 * queries.len() as f64));
    }
    check(maes.windows(2).all(|w| w[1] <= w[0]), || format!("MAE not non-increasing: {maes:?}"))?;
    check(maes[2] <= 0.02, || format!("MAE at n=10000 is {}", maes[2]))?;
    Ok(format!("MAE {:.4} / {:.4} / {:.4}", maes[0], maes[1], maes[2]))
}

fn contour_quality() -> Outcome {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/animals.csv");
    let file = File::open(path).map_err(|e| format!("{path}: {e}"))?;
    let mut clouds = vec![("animals".to_string(), load_csv(file, true).map_err(|e| e.to_string())?)];
    for kind in [Scenario::S1, Scenario::S2, Scenario::S3] {
        let spec = ScenarioSpec { kind, n: 1000, seed: 42 };
        clouds.push((kind.to_string(), generate(spec).map_err(|e| e.to_string())?));
    }
    let levels = linspace_levels(0.25, 10);
    let config = ContourConfig::default();
    let mut worst = 0.0_f64;
    let mut vertices = 0;
    for (name, cloud) in &clouds {
        for q in [1.0, 2.0, 4.0, 8.0] {
            let order = DepthOrder::Finite(q);
            let polys = contour_levels(cloud, order, &levels, &config).map_err(|e| format!("{name} q={q}: {e}"))?;
            let nested = check_nested_convex(&polys).map_err(|e| e.to_string())?;
            check(nested, || format!("{name} q={q}: contours not nested and convex"))?;
            for poly in &polys {
                for v in &poly.vertices {
                    let gap = (depth(cloud, v, order)? - poly.level).abs();
                    check(gap <= 1e-4, || format!("{name} q={q} level {}: vertex {v:?} off by {gap:e}", poly.level))?;
                    worst = worst.max(gap);
                    vertices += 1;
                }
            }
        }
    }
    Ok(format!("16 contour sets nested and convex; {vertices} vertices within {worst:.1e}"))
}

fn lcg(seed: &mut u64) -> f64 {
    *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    ((*seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
}

fn gradients() -> Outcome {
    let mut seed = 99;
    let mut worst = 0.0_f64;
    for probe in 0..100 {
        let q = [1.5, 2.0, 3.0, 4.0, 8.0][probe % 5];
        let n = 10 + probe % 11;
        let mut c = vec![0.0; 3 * n];
        for i in 0..n {
            c[i] = lcg(&mut seed);
            c[n + i] = lcg(&mut seed);
            c[2 * n + i] = 1.0;
        }
        let c = Matrix::new(3, n, c).map_err(|e| e.to_string())?;
        let x = [0.5 * lcg(&mut seed), 0.5 * lcg(&mut seed)];
        let p = min_norm_solution(&c, &[x[0], x[1], 1.0]).map_err(|e| e.to_string())?;
        let basis = nullspace_basis(&c).map_err(|e| e.to_string())?;
        let prog = NullspaceProgram::new(p, NullBasis::Dense(basis), q).map_err(|e| e.to_string())?;
        let z: Vec<f64> = (0..prog.dim()).map(|_| 0.2 * lcg(&mut seed) / n as f64).collect();
        let (_, g) = objective_and_gradient(&prog, &z);
        let scale = g.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-12);
        let h = 1e-6;
        for j in 0..z.len() {
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[j] += h;
            zm[j] -= h;
            let fd = (objective_and_gradient(&prog, &zp).0 - objective_and_gradient(&prog, &zm).0) / (2.0 * h);
            let rel = (fd - g[j]).abs() / scale;
            check(rel <= 1e-5, || format!("probe {probe} q={q} coord {j}: relative error {rel:e}"))?;
            worst = worst.max(rel);
        }
    }
    Ok(format!("100 probes, max relative error {worst:.1e}"))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn performance() -> Outcome {
    let cloud = generate(ScenarioSpec {
        kind: Scenario::S3,
        n: 1000,
        seed: 42,
    })
    .map_err(|e| e.to_string())?;
    let x = along(cloud.mean(), &[0.6, 0.8], 1.5);
    let mut report = Vec::new();
    for (order, limit) in [
        (DepthOrder::Finite(1.0), 1.0),
        (DepthOrder::Finite(2.0), 1.0),
        (DepthOrder::Infinity, 1.0),
        (DepthOrder::Finite(4.0), 5.0),
    ] {
        let (res, t) = timed(|| depth(&cloud, &x, order));
        res?;
        check(t.as_secs_f64() < limit, || format!("q={order} query took {t:?}"))?;
        report.push(format!("q={order} {t:.1?}"));
    }
    let levels = linspace_levels(0.25, 10);
    for order in ORDERS {
        let (res, t) = timed(|| contour_levels(&cloud, order, &levels, &ContourConfig::default()));
        res.map_err(|e| e.to_string())?;
        check(t < Duration::from_secs(300), || format!("q={order} contour took {t:?}"))?;
        report.push(format!("contour q={order} {t:.1?}"));
    }
    let bisect = ContourConfig {
        search: RaySearch::Bisection,
        ..ContourConfig::default()
    };
    let (res, t) = timed(|| contour_levels(&cloud, DepthOrder::Finite(2.0), &levels, &bisect));
    res.map_err(|e| e.to_string())?;
    check(t < Duration::from_secs(300), || format!("bisection contour took {t:?}"))?;
    report.push(format!("bisection contour q=2 {t:.1?}"));
    Ok(report.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("L2 depth equals Mahalanobis depth", agrees_with_mahalanobis),
        ("exact values on the line", exact_values),
        ("affine invariance, maximality, monotonicity, vanishing", depth_axioms),
        ("order monotonicity and power-mean sandwich", monotonicity_and_sandwich),
        ("positive depth outside the hull", outside_problem),
        ("Monte Carlo convergence at q = 2", monte_carlo),
        ("nested convex contours at their levels", contour_quality),
        ("gradients match central differences", gradients),
        ("performance", performance),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{elapsed:.1?}]", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {} {name}: {why} [{elapsed:.1?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
