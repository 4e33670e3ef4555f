//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria 5 and 7 are expected to fail; see the README. The run fails if
//! any other criterion fails or if either of those starts passing.

use std::time::Instant;

use ccindex_core::cc_solver::{check_property_f, check_quotient_lift, equivariance_test};
use ccindex_core::indices::{epsilon, CENTRAL_TOL, MIN_GAP_RATIO};
use ccindex_core::mass_geometry::{mass_inner, orbit_dimension, project_center};
use ccindex_core::rel_equilibria::{
    inequality_gate, lift, maximize_restricted, restricted_u, verify_dynamics, RotatingSolution,
};
use ccindex_core::sampling::{random_ellipsoid_point, random_permutation, random_plane, random_rotation};
use ccindex_core::{
    census, find_re, fixed_point_index, identity_check, Configuration, CriticalRecord, CylinderSpec,
    EllipsoidPoint, Error, ExampleParams, GroupElement, Masses, PairPotential, Permutation, Points,
    RelEquilibriumRecord, SolverConfig,
};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXPECTED_RED: [usize; 2] = [5, 7];

struct Outcome {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn random_masses(rng: &mut ChaCha8Rng, n: usize) -> Masses {
    Masses::new((0..n).map(|_| rng.gen_range(0.2..3.0)).collect()).unwrap()
}

fn random_potential(rng: &mut ChaCha8Rng, n: usize, charged: bool) -> PairPotential {
    let m = random_masses(rng, n);
    let alpha = rng.gen_range(0.5..3.0);
    if charged {
        let gamma: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        PairPotential::charged(m, &gamma, alpha).unwrap()
    } else {
        PairPotential::newtonian(m, alpha).unwrap()
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn shifted(q: &Points, i: usize, h: f64) -> Points {
    let mut c = q.as_slice().to_vec();
    c[i] += h;
    Points::new(q.dim(), c).unwrap()
}

fn c1_oracles() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (mut worst_g, mut worst_h) = (0.0f64, 0.0f64);
    for k in 0..200 {
        let n = rng.gen_range(2..=6);
        let d = rng.gen_range(2..=3);
        let pot = random_potential(&mut rng, n, k % 2 == 1);
        let q = random_ellipsoid_point(&mut rng, pot.masses(), d).unwrap();
        let scale = inf_norm(q.as_slice());
        let h = f64::EPSILON.cbrt() * scale;
        let g = pot.euclid_gradient(&q).unwrap();
        let fd: Vec<f64> = (0..n * d)
            .map(|i| (pot.value(&shifted(&q, i, h)).unwrap() - pot.value(&shifted(&q, i, -h)).unwrap()) / (2.0 * h))
            .collect();
        let diff: Vec<f64> = g.as_slice().iter().zip(&fd).map(|(a, b)| a - b).collect();
        worst_g = worst_g.max(inf_norm(&diff) / inf_norm(g.as_slice()));
        let hess = pot.hessian(&q).unwrap();
        let mut fdh = DMatrix::zeros(n * d, n * d);
        for i in 0..n * d {
            let a = pot.euclid_gradient(&shifted(&q, i, h)).unwrap();
            let b = pot.euclid_gradient(&shifted(&q, i, -h)).unwrap();
            for j in 0..n * d {
                fdh[(j, i)] = (a.as_slice()[j] - b.as_slice()[j]) / (2.0 * h);
            }
        }
        worst_h = worst_h.max((&hess - fdh).amax() / hess.amax());
    }
    let secs = t0.elapsed().as_secs_f64();
    Outcome {
        id: 1,
        name: "gradient/Hessian oracles",
        pass: worst_g <= 1e-6 && worst_h <= 1e-5 && secs < 10.0,
        detail: format!("200 instances, worst relative gradient error {worst_g:.2e}, Hessian {worst_h:.2e}, {secs:.2}s"),
    }
}

fn c2_euler() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst = 0.0f64;
    for k in 0..1000 {
        let n = rng.gen_range(2..=6);
        let d = rng.gen_range(2..=3);
        let pot = random_potential(&mut rng, n, k % 2 == 1);
        let q = random_ellipsoid_point(&mut rng, pot.masses(), d).unwrap();
        let u = pot.value(&q).unwrap();
        if u.abs() < 1e-3 {
            continue;
        }
        let au = pot.alpha() * u;
        let ip = mass_inner(&pot.mass_gradient(&q).unwrap(), &q, pot.masses()).unwrap();
        worst = worst.max((ip + au).abs() / au.abs());
    }
    Outcome {
        id: 2,
        name: "Euler identity",
        pass: worst <= 1e-10,
        detail: format!("1000 instances, worst relative residual {worst:.2e}"),
    }
}

/// Masses and charges constant on blocks, so any permutation inside a block
/// preserves them.
fn blocked_problem(rng: &mut ChaCha8Rng, n: usize) -> (PairPotential, Vec<usize>) {
    let blocks = rng.gen_range(1..=n.min(3));
    let label: Vec<usize> = (0..n).map(|j| j % blocks).collect();
    let mass: Vec<f64> = (0..blocks).map(|_| rng.gen_range(0.3..2.0)).collect();
    let charge: Vec<f64> = (0..blocks).map(|_| rng.gen_range(-0.9..0.9)).collect();
    let m = Masses::new(label.iter().map(|b| mass[*b]).collect()).unwrap();
    let gamma: Vec<f64> = label.iter().map(|b| charge[*b]).collect();
    let pot = PairPotential::charged(m, &gamma, rng.gen_range(0.5..2.5)).unwrap();
    let mut perm: Vec<usize> = (0..n).collect();
    for b in 0..blocks {
        let idx: Vec<usize> = (0..n).filter(|j| label[*j] == b).collect();
        let shuffle = random_permutation(rng, idx.len());
        for (k, s) in shuffle.iter().enumerate() {
            perm[idx[k]] = idx[*s];
        }
    }
    (pot, perm)
}

fn c3_equivariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let n = rng.gen_range(2..=6);
        let d = rng.gen_range(2..=3);
        let (pot, perm) = blocked_problem(&mut rng, n);
        let q = random_ellipsoid_point(&mut rng, pot.masses(), d).unwrap();
        let g = GroupElement::new(Permutation::new(perm).unwrap(), random_rotation(&mut rng, d)).unwrap();
        worst = worst.max(equivariance_test(&pot, &q, &g).unwrap());
    }
    Outcome {
        id: 3,
        name: "equivariance of F",
        pass: worst <= 1e-11,
        detail: format!("500 instances, worst |F(gq) - gF(q)|_M {worst:.2e}"),
    }
}

fn c4_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let (mut worst, mut zero_proj) = (f64::NEG_INFINITY, 0);
    for _ in 0..1000 {
        let n = rng.gen_range(2..=6);
        let d = rng.gen_range(2..=3);
        let pot = PairPotential::newtonian(random_masses(&mut rng, n), 1.0).unwrap();
        let q = random_ellipsoid_point(&mut rng, pot.masses(), d).unwrap();
        let plane = random_plane(&mut rng, d);
        let c = check_property_f(&pot, &q, &plane).unwrap();
        worst = worst.max(c.value);
        if c.projected_norm2 <= 0.0 {
            zero_proj += 1;
        }
    }
    Outcome {
        id: 4,
        name: "projected sign property",
        pass: worst <= 1e-12 && zero_proj == 0,
        detail: format!("1000 instances, largest p(dU/dq_j).p(q_j) {worst:.2e}, zero projections {zero_proj}"),
    }
}

/// Census records shared by criteria 5 to 8.
struct Sweep {
    pot: PairPotential,
    dim: usize,
    records: Vec<CriticalRecord>,
}

fn sweeps() -> (Vec<Sweep>, f64) {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut out = Vec::new();
    for n in 2..=5 {
        for dim in 2..=3 {
            for equal in [true, false] {
                let m = if equal { Masses::equal(n).unwrap() } else { random_masses(&mut rng, n) };
                let pot = PairPotential::newtonian(m, 1.0).unwrap();
                let cfg = SolverConfig { n_starts: 40, rng_seed: rng.gen(), ..Default::default() };
                let report = census(&pot, dim, &cfg).unwrap();
                let records = report.classes.into_iter().map(|c| c.record).collect();
                out.push(Sweep { pot, dim, records });
            }
        }
    }
    (out, t0.elapsed().as_secs_f64())
}

fn c5_identity(sweeps: &[Sweep], census_secs: f64) -> Outcome {
    let t0 = Instant::now();
    let (mut count, mut stated, mut corrected) = (0, 0.0f64, 0.0f64);
    for s in sweeps {
        for r in &s.records {
            let c = identity_check(&s.pot, &r.q).unwrap();
            stated = stated.max(c.stated_residual);
            corrected = corrected.max(c.residual);
            count += 1;
        }
    }
    let secs = census_secs + t0.elapsed().as_secs_f64();
    Outcome {
        id: 5,
        name: "identity -aU(I-F') = D^2U~",
        pass: stated <= 1e-8 && secs < 60.0,
        detail: format!(
            "{count} records, worst stated-form residual {stated:.2e}; with the opposite sign {corrected:.2e}; {secs:.2}s"
        ),
    }
}

fn c6_kernel(sweeps: &[Sweep]) -> Outcome {
    let (mut accepted, mut refused, mut min_gap) = (0, Vec::new(), f64::INFINITY);
    for s in sweeps {
        for r in &s.records {
            if r.isotropy_rank != orbit_dimension(s.dim) {
                continue;
            }
            match fixed_point_index(&s.pot, &r.q) {
                Ok(ix) if ix.kernel_dim == orbit_dimension(s.dim) && ix.gap_ratio >= MIN_GAP_RATIO => {
                    accepted += 1;
                    min_gap = min_gap.min(ix.gap_ratio);
                }
                Ok(ix) => refused.push(format!("kernel {} gap {:.1e}", ix.kernel_dim, ix.gap_ratio)),
                Err(e) => refused.push(e.to_string()),
            }
        }
    }
    Outcome {
        id: 6,
        name: "kernel dimension d(d-1)/2",
        pass: accepted > 0 && refused.is_empty(),
        detail: format!("{accepted} maximal-isotropy records accepted, smallest gap ratio {min_gap:.2e}, refused {refused:?}"),
    }
}

fn c7_routes(sweeps: &[Sweep]) -> Outcome {
    let spots = epsilon(3, 2) == 2 && epsilon(5, 2) == 6 && epsilon(6, 3) == 11;
    let (mut total, mut agree, mut planar_ok, mut disagree) = (0, 0, true, Vec::new());
    for s in sweeps {
        for r in &s.records {
            let Ok(ix) = fixed_point_index(&s.pot, &r.q) else { continue };
            total += 1;
            if ix.routes_agree {
                agree += 1;
            } else {
                disagree.push(format!("n={} d={} eps={}", r.q.n(), s.dim, ix.epsilon));
            }
            if s.dim == 2 {
                let parity = if ix.morse_index % 2 == 0 { 1 } else { -1 };
                planar_ok &= ix.fixed_point_index == parity && ix.formula_index == parity;
            }
        }
    }
    disagree.dedup();
    Outcome {
        id: 7,
        name: "index routes agree",
        pass: spots && total > 0 && agree == total && planar_ok,
        detail: format!(
            "epsilon spot checks {}, routes agree on {agree}/{total}, d=2 equals (-1)^mu: {planar_ok}; disagreements at {disagree:?}",
            if spots { "ok" } else { "wrong" }
        ),
    }
}

fn c8_lift(sweeps: &[Sweep]) -> Outcome {
    let (mut count, mut worst) = (0, 0.0f64);
    let mut bad = 0;
    for s in sweeps.iter().filter(|s| s.dim == 3) {
        for r in &s.records {
            match check_quotient_lift(&s.pot, &r.q, CENTRAL_TOL) {
                Ok(l) => {
                    count += 1;
                    worst = worst.max(l.deviation);
                }
                Err(Error::NotQuotientFixedPoint { .. }) => bad += 1,
                Err(e) => panic!("{e}"),
            }
        }
    }
    Outcome {
        id: 8,
        name: "quotient lift is the identity",
        pass: count > 0 && bad == 0 && worst <= 1e-8,
        detail: format!("{count} spatial fixed points, worst |g - I| {worst:.2e}"),
    }
}

fn c9_example() -> Outcome {
    let t0 = Instant::now();
    let p = ExampleParams::new(20.0, -2.0, -2.0).unwrap();
    let gates = inequality_gate(&p);
    let gate_arith = gates.vertical_value == -71.0 && gates.horizontal_values == (27.0, 328.0);
    let pot = p.potential().unwrap();
    let (t, z) = (std::f64::consts::FRAC_PI_4, 0.5);
    let u_start = restricted_u(t, z, &p).unwrap();
    let lifted = pot.value(&lift(t.cos(), t.sin(), z).unwrap()).unwrap();
    let start_ok = u_start > 0.0 && (u_start - lifted).abs() <= 1e-12 * u_start.abs().max(1.0);
    let max = maximize_restricted(&p, 200).unwrap();
    let interior = max.z > 1e-3 && max.t > 0.0 && max.t < std::f64::consts::FRAC_PI_2;
    let (s, c) = max.t.sin_cos();
    let rec = RelEquilibriumRecord::at(&pot, Configuration::new(lift(c, s, max.z).unwrap()).unwrap()).unwrap();
    let secs = t0.elapsed().as_secs_f64();
    Outcome {
        id: 9,
        name: "six-body example",
        pass: gates.all() && gate_arith && start_ok && interior && rec.abs_residual <= 1e-8 && rec.u_value > 0.0 && !rec.central && secs < 5.0,
        detail: format!(
            "gates {} ({} < 0, {} < {}), U(pi/4, 1/2) = {u_start:.12}, max at t = {:.8}, z = {:.8}, U = {:.10}, residual {:.2e}, central {}, {secs:.2}s",
            gates.all(),
            gates.vertical_value,
            gates.horizontal_values.0,
            gates.horizontal_values.1,
            max.t,
            max.z,
            max.u,
            rec.abs_residual,
            rec.central
        ),
    }
}

fn c10_dynamics() -> Outcome {
    let m = Masses::equal(2).unwrap();
    let pot = PairPotential::newtonian(m.clone(), 1.0).unwrap();
    let a = 0.5f64.sqrt();
    let q = EllipsoidPoint::from_points(Points::from_rows(&[[a, 0.0], [-a, 0.0]]).unwrap(), &m).unwrap();
    let sol = RotatingSolution::from_central(&pot, &CriticalRecord::from_point(&pot, q, 0).unwrap()).unwrap();
    let two_body = verify_dynamics(&pot, &sol, sol.period(), 10_000).unwrap().drift;

    let p = ExampleParams::new(20.0, -2.0, -2.0).unwrap();
    let pot6 = p.potential().unwrap();
    let seed = Configuration::new(lift(0.8, 0.58, 0.22).unwrap()).unwrap();
    let rec = find_re(&pot6, &CylinderSpec::new(2.0).unwrap(), &seed, &SolverConfig::default()).unwrap();
    let sol6 = RotatingSolution::from_relative_equilibrium(&rec);
    let six_body = verify_dynamics(&pot6, &sol6, sol6.period(), 20_000).unwrap().drift;

    let m4 = Masses::equal(4).unwrap();
    let pot4 = PairPotential::newtonian(m4.clone(), 1.0).unwrap();
    let q4 = random_ellipsoid_point(&mut ChaCha8Rng::seed_from_u64(1010), &m4, 2).unwrap();
    let still = RotatingSolution::stationary(project_center(&q4, &m4).unwrap()).unwrap();
    let control = verify_dynamics(&pot4, &still, 0.2, 2_000).unwrap().drift;
    Outcome {
        id: 10,
        name: "rigid rotations solve the equations of motion",
        pass: two_body <= 1e-6 && six_body <= 1e-5 && control > 1e-2,
        detail: format!("two-body drift {two_body:.2e}, six-body drift {six_body:.2e}, control drift {control:.2e}"),
    }
}

fn c11_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("p.json");
    std::fs::write(
        &problem,
        r#"{"n": 4, "d": 2, "masses": [1, 1.5, 0.7, 1.2], "potential": {"type": "newtonian"}, "solver": {"n_starts": 48}}"#,
    )
    .unwrap();
    let mut outputs = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("r{k}.json"));
        let csv = dir.path().join(format!("r{k}.csv"));
        let argv = [
            "ccindex",
            "census",
            problem.to_str().unwrap(),
            "--seed",
            "42",
            "--out",
            out.to_str().unwrap(),
            "--csv",
            csv.to_str().unwrap(),
        ];
        let code = ccindex_cli::execute(argv, &mut std::io::sink(), &mut std::io::sink());
        assert_eq!(code, 0);
        outputs.push((std::fs::read(out).unwrap(), std::fs::read(csv).unwrap()));
    }
    let same = outputs[0] == outputs[1];
    Outcome {
        id: 11,
        name: "deterministic census report",
        pass: same && !outputs[0].0.is_empty(),
        detail: format!("two runs, {} JSON bytes, identical: {same}", outputs[0].0.len()),
    }
}

fn main() {
    let (sweep, census_secs) = sweeps();
    let results = vec![
        c1_oracles(),
        c2_euler(),
        c3_equivariance(),
        c4_property(),
        c5_identity(&sweep, census_secs),
        c6_kernel(&sweep),
        c7_routes(&sweep),
        c8_lift(&sweep),
        c9_example(),
        c10_dynamics(),
        c11_determinism(),
    ];
    let mut unexpected = Vec::new();
    for r in &results {
        println!("{} {:>2} {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.id, r.name, r.detail);
        if r.pass == EXPECTED_RED.contains(&r.id) {
            unexpected.push(r.id);
        }
    }
    let passed = results.iter().filter(|r| r.pass).count();
    println!("{passed}/{} criteria pass; expected failures {:?}", results.len(), EXPECTED_RED);
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
