//! Acceptance suite. Runs every criterion at its stated tolerance and time
//! budget, prints one PASS/FAIL line each and exits non-zero on any failure.
//!
//! `cargo test -p topodsp --test acceptance`

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{
    difference_equation, gcd, grid_inside, mirrored_images, oracle_betti, random_complex, random_stable_feedback,
    rips_complex_at, single_cell_corruptions, sort_images,
};
use topodsp::acoustics::{
    image_sources, path_distance_series, torus_winding_path, waveguide_recurrence_period, BoundaryCondition,
    Room2D, WaveguideState,
};
use topodsp::complex::{boundary_matrix_gf2, close_complex, make_simplex, Coefficients, VertexGraph};
use topodsp::dynamics::{oscillate, step_phase, Phase, PhaseFunctionSpec, ProjectionSpec};
use topodsp::embedding::{degeneracy_score, delay_embed, TimeSeries};
use topodsp::homology::{betti, check_fundamental_lemma};
use topodsp::persistence::{
    alive_at, figure_eight, noisy_circle, persistence_pairs, vietoris_rips, Barcode, PointCloud,
};
use topodsp::sheaf_filter::{fm_filter, lti_filter, propagate, verify_section};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let took = start.elapsed();
    if took > budget {
        Err(format!("took {took:.2?}, budget {budget:?}"))
    } else {
        Ok(())
    }
}

fn topodsp(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_topodsp"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {:?}", out.status.code()));
    }
    Ok(out.stdout)
}

fn betti_rows(stdout: &[u8]) -> Vec<usize> {
    String::from_utf8_lossy(stdout)
        .lines()
        .skip(1)
        .take_while(|l| !l.starts_with("H_"))
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect()
}

fn betti_reproduction() -> Outcome {
    let cases: [(&str, &[usize]); 5] = [
        ("sphere", &[1, 0, 1]),
        ("tetra", &[1, 0, 0]),
        ("torus", &[1, 2, 1]),
        ("triangle", &[1, 1]),
        ("triangle-filled", &[1, 0]),
    ];
    let mut slowest = Duration::ZERO;
    for (demo, want) in cases {
        let start = Instant::now();
        let got = betti_rows(&topodsp(&["homology", "--demo", demo])?);
        within(start, Duration::from_secs(1))?;
        slowest = slowest.max(start.elapsed());
        // higher dimensions present in the complex must carry no homology
        let matches = got.len() >= want.len() && got[..want.len()] == *want && got[want.len()..].iter().all(|&b| b == 0);
        ensure!(matches, "{demo}: got {got:?}, want {want:?}");
    }
    Ok(format!("5 demos exact, slowest {slowest:.2?}"))
}

fn boundary_fidelity() -> Outcome {
    // Displayed labelling: e0 = v0v1, e1 = v1v2, e2 = v0v2.
    let shown_edges = [[0u32, 1], [1, 2], [0, 2]];
    let shown_d1 = [[1u8, 0, 1], [1, 1, 0], [0, 1, 1]];
    let hollow = close_complex(shown_edges.iter().map(|e| make_simplex(e).unwrap()));
    let filled = close_complex([make_simplex(&[0, 1, 2]).unwrap()]);
    for c in [&hollow, &filled] {
        let d1 = boundary_matrix_gf2(c, 1);
        for (col, edge) in shown_edges.iter().enumerate() {
            let j = c.ordinal(&make_simplex(edge).unwrap()).unwrap();
            for (row, shown) in shown_d1.iter().enumerate() {
                ensure!(d1.get(row, j) == (shown[col] == 1), "∂1 entry v{row}, e{col}");
            }
        }
    }
    let graph = VertexGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).map_err(|e| e.to_string())?;
    ensure!(graph.incidence_matrix().to_rows() == shown_d1.map(|r| r.to_vec()).to_vec(), "graph incidence");

    let d2_filled = boundary_matrix_gf2(&filled, 2);
    ensure!(d2_filled.to_rows() == vec![vec![1], vec![1], vec![1]], "filled ∂2 {:?}", d2_filled.to_rows());
    let d2_hollow = boundary_matrix_gf2(&hollow, 2);
    ensure!((d2_hollow.rows(), d2_hollow.cols()) == (3, 0), "hollow ∂2 should have no columns");

    let directed = VertexGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).map_err(|e| e.to_string())?;
    let oriented = directed.oriented_incidence_matrix();
    ensure!(
        oriented.to_rows() == vec![vec![1, 0, -1], vec![-1, 1, 0], vec![0, -1, 1]],
        "oriented ∂1 {:?}",
        oriented.to_rows()
    );
    ensure!(oriented.column_sum() == vec![0, 0, 0], "oriented columns do not cancel");
    Ok("∂1, ∂2 and oriented ∂1 exact".into())
}

fn fundamental_lemma() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for k in 0..1000 {
        let c = random_complex(&mut rng, 10, 3);
        for n in 1..=3 {
            for mode in [Coefficients::Gf2, Coefficients::Oriented] {
                ensure!(check_fundamental_lemma(&c, n, mode), "complex {k}, n = {n}, {mode:?}");
            }
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("1000 complexes, both modes, {:.2?}", start.elapsed()))
}

fn persistence_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checks = 0;
    for k in 0..100 {
        let n = rng.gen_range(1..=10);
        let pts: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]).collect();
        let f = vietoris_rips(&PointCloud::new(pts.clone()).unwrap(), 2, f64::INFINITY).map_err(|e| e.to_string())?;
        let bars = persistence_pairs(&f).map_err(|e| e.to_string())?;
        for t in f.critical_values() {
            let sub = f.sublevel(t);
            let oracle = rips_complex_at(&pts, 2, t);
            for dim in 0..=1 {
                let alive = alive_at(&bars, dim, t);
                ensure!(alive == betti(&sub, dim), "cloud {k}, t = {t}, H{dim}: sublevel betti differs");
                ensure!(alive == oracle_betti(&oracle, dim), "cloud {k}, t = {t}, H{dim}: oracle differs");
                checks += 1;
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{checks} (cloud, t, n) checks, {:.2?}", start.elapsed()))
}

fn unit_square_barcode() -> Outcome {
    let square = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
    let f = vietoris_rips(&square, 2, 2.0).map_err(|e| e.to_string())?;
    let b = persistence_pairs(&f).map_err(|e| e.to_string())?;
    let h1: Vec<_> = b.in_dim(1).collect();
    ensure!(h1.len() == 1, "expected one H1 bar, got {}", h1.len());
    let (birth, death) = (h1[0].birth, h1[0].death);
    ensure!((birth - 1.0).abs() <= 1e-12, "birth {birth}");
    ensure!((death - 2f64.sqrt()).abs() <= 1e-12, "death {death}");
    Ok(format!("H1 [{birth}, {death})"))
}

fn h1_summary(b: &Barcode) -> String {
    let l = b.lengths(1);
    format!("{:?}", l.iter().take(3).map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>())
}

fn noisy_circle_persistence() -> Outcome {
    let start = Instant::now();
    let circle = noisy_circle(100, 1.0, 0.05, 7).map_err(|e| e.to_string())?;
    let f = vietoris_rips(&circle, 2, 2.0).map_err(|e| e.to_string())?;
    let b = persistence_pairs(&f).map_err(|e| e.to_string())?;
    ensure!(b.dominant_count(1, 5.0) == 1, "circle H1 lengths {}", h1_summary(&b));
    let again = persistence_pairs(&vietoris_rips(&noisy_circle(100, 1.0, 0.05, 7).unwrap(), 2, 2.0).unwrap()).unwrap();
    ensure!(again == b, "seeded run is not reproducible");

    let eight = figure_eight(60, 1.0, 0.05, 7).map_err(|e| e.to_string())?;
    let g = persistence_pairs(&vietoris_rips(&eight, 2, 2.0).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure!(g.dominant_count(1, 5.0) == 2, "figure-eight H1 lengths {}", h1_summary(&g));
    within(start, Duration::from_secs(10))?;
    Ok(format!("circle {} / eight {}, {:.2?}", h1_summary(&b), h1_summary(&g), start.elapsed()))
}

fn embedding_contrast() -> Outcome {
    let start = Instant::now();
    let quarter = delay_embed(&TimeSeries::sine(125, 100.0, 1.0), 2, 25).map_err(|e| e.to_string())?;
    let half = delay_embed(&TimeSeries::sine(150, 100.0, 1.0), 2, 50).map_err(|e| e.to_string())?;
    let (sq, sh) = (degeneracy_score(&quarter).unwrap(), degeneracy_score(&half).unwrap());
    ensure!(sq > 0.9, "quarter-period score {sq}");
    ensure!(sh < 1e-6, "half-period score {sh}");
    let bq = persistence_pairs(&vietoris_rips(&quarter, 2, 2.0).unwrap()).unwrap();
    let bh = persistence_pairs(&vietoris_rips(&half, 2, 2.0).unwrap()).unwrap();
    ensure!(bq.dominant_count(1, 5.0) == 1, "quarter-period H1 lengths {}", h1_summary(&bq));
    let longest = |b: &Barcode| b.lengths(1).first().copied().unwrap_or(0.0);
    ensure!(longest(&bh) < 0.05 * longest(&bq), "half-period H1 {} vs {}", longest(&bh), longest(&bq));
    within(start, Duration::from_secs(10))?;
    Ok(format!("scores {sq:.4} / {sh:.1e}, H1 {:.4} / {:.4}, {:.2?}", longest(&bq), longest(&bh), start.elapsed()))
}

fn oscillator_identities() -> Outcome {
    let sine = ProjectionSpec::sine();
    let quarter = oscillate(&PhaseFunctionSpec::constant(0.25), &sine, Phase::ZERO, 1000).unwrap();
    for (k, &v) in quarter.samples().iter().enumerate() {
        ensure!(v == [0.0, 1.0, 0.0, -1.0][k % 4], "quarter-turn sample {k} = {v}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let w: f64 = rng.gen_range(0.0..1.0);
        let a = oscillate(&PhaseFunctionSpec::constant(w), &sine, Phase::ZERO, 1000).unwrap();
        let b = oscillate(&PhaseFunctionSpec::constant(1.0 - w), &sine, Phase::ZERO, 1000).unwrap();
        for (x, y) in a.samples().iter().zip(b.samples()) {
            worst = worst.max((x + y).abs());
        }
    }
    ensure!(worst <= 1e-12, "aliasing identity off by {worst:e}");
    let adversarial = [
        PhaseFunctionSpec::Custom { gain: 4.5, offset: 0.0, sine_amount: -1.125, harmonic: 0.5 },
        PhaseFunctionSpec::Custom { gain: 1e6, offset: 1e12, sine_amount: 1e5, harmonic: 33.3 },
        PhaseFunctionSpec::Custom { gain: -7.0, offset: 0.3, sine_amount: 1e9, harmonic: 1e3 },
        PhaseFunctionSpec::constant(1e15 + 0.1),
    ];
    for f in adversarial {
        let mut x = Phase::new(0.5).unwrap();
        for step in 0..1_000_000 {
            let u = if step % 3 == 0 { rng.gen_range(-1e6..1e6) } else { 0.0 };
            x = step_phase(&f, x, u).map_err(|e| e.to_string())?;
            ensure!((0.0..1.0).contains(&x.value()), "{f:?} left [0, 1) at step {step}");
        }
    }
    Ok(format!("aliasing error {worst:.1e}, 4 x 10^6 stable steps"))
}

fn sheaf_lti_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let mut corruptions = 0;
    for k in 0..50 {
        let order = k % 7;
        let a = random_stable_feedback(&mut rng, order, 0.95);
        let b: Vec<f64> = (0..=order).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = lti_filter(&a, &b).map_err(|e| e.to_string())?;
        let x = TimeSeries::new((0..10_000).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let (y, sec) = propagate(&f, &x, &f.zero_state()).map_err(|e| e.to_string())?;
        let oracle = difference_equation(&a, &b, x.samples());
        for (u, v) in y.samples().iter().zip(&oracle) {
            worst = worst.max((u - v).abs());
        }
        ensure!(worst <= 1e-12, "filter {k} (order {order}) off by {worst:e}");
        ensure!(verify_section(&f, &sec, &x).unwrap().is_consistent(), "filter {k}: section rejected");

        // Every cell of a 64-sample section, then random cells of the full one.
        let short = TimeSeries::new(x.samples()[..64].to_vec()).unwrap();
        let (_, short_sec) = propagate(&f, &short, &f.zero_state()).unwrap();
        for bad in single_cell_corruptions(&short_sec, |v| v + 1e-6) {
            ensure!(!verify_section(&f, &bad, &short).unwrap().is_consistent(), "filter {k}: corruption missed");
            corruptions += 1;
        }
        for _ in 0..20 {
            let mut bad = sec.clone();
            let v = rng.gen_range(0..bad.vertices.len());
            match rng.gen_range(0..3) {
                0 => bad.vertices[v].output += 1e-6,
                1 => bad.vertices[v].input += 1e-6,
                _ => {
                    let j = rng.gen_range(0..bad.vertices[v].state.len());
                    bad.vertices[v].state[j] += 1e-6;
                }
            }
            ensure!(!verify_section(&f, &bad, &x).unwrap().is_consistent(), "filter {k}: corruption at {v} missed");
            corruptions += 1;
        }
    }
    Ok(format!("max deviation {worst:.1e}, {corruptions} corruptions rejected"))
}

fn fm_reduction() -> Outcome {
    for (omega, mod_omega, phase) in [(0.0123, 0.37, 0.0), (0.25, 0.1, 0.0), (0.6180, 0.003, 1.3), (-0.31, 0.5, -2.0)] {
        let f = fm_filter(omega, 0.0, mod_omega, phase).unwrap();
        let zeros = TimeSeries::new(vec![0.0; 10_000]).unwrap();
        let (y, _) = propagate(&f, &zeros, &f.zero_state()).map_err(|e| e.to_string())?;
        let p = ProjectionSpec::Sine { amplitude: 1.0, phase_offset: phase };
        let osc = oscillate(&PhaseFunctionSpec::constant(omega), &p, Phase::ZERO, 10_000).unwrap();
        let same = y.samples().iter().zip(osc.samples()).all(|(a, b)| a.to_bits() == b.to_bits());
        ensure!(same, "omega {omega}: series differ");
    }
    Ok("4 settings bit-identical over 10^4 samples".into())
}

fn period_doubling() -> Outcome {
    use BoundaryCondition::{Dirichlet, Neumann};
    for len in 2..=64 {
        let dd = waveguide_recurrence_period(len, Dirichlet, Dirichlet).unwrap();
        let nn = waveguide_recurrence_period(len, Neumann, Neumann).unwrap();
        let dn = waveguide_recurrence_period(len, Dirichlet, Neumann).unwrap();
        ensure!(dn == 2 * dd && dn == 2 * nn, "L = {len}: {dd}, {nn}, {dn}");
        for (l, r) in [(Dirichlet, Dirichlet), (Neumann, Neumann), (Dirichlet, Neumann)] {
            let mut s = WaveguideState::impulse(len);
            for step in 0..4 * len {
                s.step(l, r);
                ensure!(s.energy() == 1.0, "L = {len} {l}/{r}: energy {} at step {step}", s.energy());
            }
        }
    }
    Ok("L = 2..64, mixed = 2 x matched, energy exact".into())
}

fn image_source_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for k in 0..20 {
        let w = rng.gen_range(1..=24) as f64 / 4.0;
        let h = rng.gen_range(1..=24) as f64 / 4.0;
        let room = Room2D::new(
            w,
            h,
            (grid_inside(&mut rng, w), grid_inside(&mut rng, h)),
            (grid_inside(&mut rng, w), grid_inside(&mut rng, h)),
        )
        .map_err(|e| e.to_string())?;
        for order in 0..=3 {
            let mut ours: Vec<_> =
                image_sources(&room, order).iter().map(|im| (im.position.0, im.position.1, im.order)).collect();
            sort_images(&mut ours);
            ensure!(ours == mirrored_images(w, h, room.source, order), "room {k}, K = {order}");
        }
    }
    let centre = Room2D::new(1.0, 1.0, (0.5, 0.5), (0.5, 0.5)).unwrap();
    let first: Vec<_> = image_sources(&centre, 1).into_iter().filter(|im| im.order == 1).collect();
    ensure!(first.len() == 4, "{} first-order images", first.len());
    ensure!(first.iter().all(|im| im.distance == 1.0), "first-order distances {first:?}");
    Ok("20 rooms x K = 0..3 match, centre case 4 images at 1".into())
}

fn torus_path() -> Outcome {
    let mut worst = 0.0f64;
    for p in 0..=7i64 {
        for q in 0..=7i64 {
            if gcd(p, q) != 1 {
                continue;
            }
            for n in [3, 120, 1000] {
                let tp = torus_winding_path(p, q, n, 2.0, 1.0, true).map_err(|e| e.to_string())?;
                let (a, b) = (tp.point_unreduced(n), tp.point(0));
                let err = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
                worst = worst.max(err);
            }
        }
    }
    ensure!(worst <= 1e-12, "closure error {worst:e}");
    for (p, q) in [(1, 0), (0, 1)] {
        let s = path_distance_series(&torus_winding_path(p, q, 120, 2.0, 1.0, true).unwrap());
        let (lo, hi) = s.samples().iter().fold((f64::MAX, f64::MIN), |(l, h), &v| (l.min(v), h.max(v)));
        ensure!(hi - lo <= 1e-12, "({p}, {q}) series spread {:e}", hi - lo);
    }
    Ok(format!("closure error {worst:.1e}"))
}

fn cli_determinism() -> Outcome {
    let mut runs = 0;
    for demo in ["triangle", "triangle-filled", "tetra", "tetra-hollow", "torus", "sphere"] {
        let a = topodsp(&["homology", "--demo", demo])?;
        let b = topodsp(&["homology", "--demo", demo])?;
        ensure!(a == b, "homology --demo {demo} differs between runs");
        runs += 2;
    }
    for demo in ["noisy-circle", "figure-eight"] {
        let a = topodsp(&["persist", "--demo", demo])?;
        let b = topodsp(&["persist", "--demo", demo])?;
        let c = topodsp(&["persist", "--demo", demo, "--threads", "1"])?;
        let d = topodsp(&["persist", "--demo", demo, "--threads", "4"])?;
        ensure!(a == b, "persist --demo {demo} differs between runs");
        ensure!(a == c && a == d, "persist --demo {demo} depends on thread count");
        runs += 4;
    }
    Ok(format!("{runs} runs byte-identical"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("Betti reproduction", betti_reproduction),
        ("boundary-matrix fidelity", boundary_fidelity),
        ("fundamental lemma", fundamental_lemma),
        ("persistence oracle equivalence", persistence_oracle),
        ("unit-square barcode", unit_square_barcode),
        ("noisy-circle persistence", noisy_circle_persistence),
        ("embedding degeneracy contrast", embedding_contrast),
        ("oscillator identities", oscillator_identities),
        ("sheaf-LTI equivalence", sheaf_lti_equivalence),
        ("FM reduction", fm_reduction),
        ("double-cover period doubling", period_doubling),
        ("image-source oracle", image_source_oracle),
        ("torus path", torus_path),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
