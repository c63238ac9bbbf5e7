//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Tolerances and budgets are pinned below.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use qconstell::combinatorics::{
    ame_4_3, card_square, graeco_latin, permutation_from_pair, search_two_unitary, tensor_from_unitary, verify_ame,
    verify_graeco_latin, verify_oqls, verify_perfect_tensor, verify_two_unitary, QuantumLatinTable,
};
use qconstell::constellations::{
    hesse_fiducial, mub_prime, search_mub, search_sic, sic_orbit, tetrahedron_fiducial, verify_mub, verify_sic,
};
use qconstell::entanglement::{
    classify_werner, compressed_matrix, ks_objective, ks_search_violation, projected_spectrum_full,
    random_normal_instance, search_distillable, werner, werner_pt_spectrum, KsInstance, WernerClass,
};
use qconstell::linalg::{hermitian_eigenvalues, partial_transpose, Complex64};
use qconstell::random::{complex_normal_vec, haar_unitary, rng_from_seed};
use qconstell::search::manifold::point_to_complex;
use qconstell::search::{replay, KsMode, SearchCertificate, SearchConfig};
use qconstell::{c64, ComplexMatrix, DensityMatrix, StateVector};

const SIC_RESIDUAL: f64 = 1e-8;
const SIC_SECONDS: f64 = 300.0;
const SIC_RESTARTS: usize = 60;
const SEARCH_GRAD_TOL: f64 = 1e-12;
const EXACT_TOL: f64 = 1e-10;
const PERTURBATION: f64 = 1e-4;
const PERTURBED_WINDOW: (f64, f64) = (1e-5, 1e-3);
const MUB6_RESIDUAL: f64 = 1e-10;
const EULER_TOL: f64 = 1e-12;
const AME_TOL: f64 = 1e-10;
const QUBIT_STALL_FLOOR: f64 = 1e-2;
const U36_RESTARTS: usize = 100;
const U36_ITERS: usize = 500;
const U36_SECONDS: f64 = 3600.0;
const WERNER_TOL: f64 = 1e-12;
const BOUNDARY_OFFSET: f64 = 1e-9;
const WITNESS_VALUE: f64 = -0.0147;
const NONDISTILLABLE_FLOOR: f64 = -1e-9;
const DISTILL_RESTARTS: usize = 100;
const TWO_COPY_SECONDS: f64 = 7200.0;
const COMPRESSION_TOL: f64 = 1e-10;
const COMPRESSION_TRIALS: usize = 100;
const NORMAL_SAMPLES: usize = 10_000;
const KS_BOUND_TOL: f64 = 1e-10;
const KS_EXPLICIT_TOL: f64 = 1e-12;
const KS_RESTARTS: usize = 1000;
const KS_ITERS: usize = 300;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

fn fiducial_at(cert: &SearchCertificate, n: usize) -> StateVector {
    StateVector::normalized(vec![n], point_to_complex(&cert.best_point)).expect("best point decodes")
}

fn criterion_1() -> Verdict {
    let mut notes = Vec::new();
    for n in 2..=5 {
        let cfg = SearchConfig::default().with_seed(100 + n as u64).with_restarts(SIC_RESTARTS).with_grad_tol(SEARCH_GRAD_TOL);
        let start = Instant::now();
        let cert = search_sic(n, &cfg).map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        let rep = verify_sic(&sic_orbit(&fiducial_at(&cert, n)).unwrap(), SIC_RESIDUAL).unwrap();
        ensure(rep.passed, format!("N={n}: residual {:.2e} > {SIC_RESIDUAL:e}", rep.max_residual))?;
        ensure(secs <= SIC_SECONDS, format!("N={n}: {secs:.1}s > {SIC_SECONDS}s"))?;
        notes.push(format!("N={n} residual {:.1e} in {secs:.2}s", rep.max_residual));
    }
    Ok(format!("{} ({SIC_RESTARTS} restarts each, tol {SIC_RESIDUAL:e})", notes.join(", ")))
}

/// `|<a|b>|²` computed directly, independent of the verifier.
fn overlap(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm_sqr()
}

fn criterion_2() -> Verdict {
    let tet = verify_sic(&sic_orbit(&tetrahedron_fiducial()).unwrap(), EXACT_TOL).unwrap();
    let hesse_orbit = sic_orbit(&hesse_fiducial()).unwrap();
    let hesse = verify_sic(&hesse_orbit, EXACT_TOL).unwrap();
    ensure(tet.passed, format!("tetrahedron residual {:.2e}", tet.max_residual))?;
    ensure(hesse.passed, format!("Hesse residual {:.2e}", hesse.max_residual))?;

    // independent overlap check on the Hesse orbit
    let target = 1.0 / 4.0;
    for (i, a) in hesse_orbit.iter().enumerate() {
        for b in &hesse_orbit[i + 1..] {
            let o = overlap(a.amplitudes(), b.amplitudes());
            ensure((o - target).abs() <= EXACT_TOL, format!("Hesse overlap {o} != 1/4"))?;
        }
    }

    let mut moved = hesse_orbit.clone();
    let mut amps = moved[0].amplitudes().to_vec();
    amps[1] += c64(PERTURBATION, 0.0);
    moved[0] = StateVector::normalized(vec![3], amps).unwrap();
    let shift: f64 = moved[0]
        .amplitudes()
        .iter()
        .zip(hesse_orbit[0].amplitudes())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let pert = verify_sic(&moved, EXACT_TOL).unwrap();
    let (lo, hi) = PERTURBED_WINDOW;
    ensure(!pert.passed, "perturbed orbit passed".into())?;
    ensure(
        (lo..=hi).contains(&pert.max_residual),
        format!("perturbed residual {:.2e} outside [{lo:e}, {hi:e}]", pert.max_residual),
    )?;
    Ok(format!(
        "tetrahedron {:.1e}, Hesse {:.1e} at {EXACT_TOL:e}; perturbation {shift:.1e} gives residual {:.2e} in [{lo:e}, {hi:e}]",
        tet.max_residual, hesse.max_residual, pert.max_residual
    ))
}

fn criterion_3() -> Verdict {
    let mut notes = Vec::new();
    for p in [2usize, 3, 5, 7] {
        let set = mub_prime(p).map_err(|e| e.to_string())?;
        let rep = verify_mub(&set.bases, EXACT_TOL).unwrap();
        ensure(set.bases.len() == p + 1, format!("p={p}: {} bases", set.bases.len()))?;
        ensure(rep.passed, format!("p={p}: residual {:.2e}", rep.max_residual))?;
        // independent unbiasedness spot check between the first two bases
        let (b0, b1) = (&set.bases[0], &set.bases[1]);
        for i in 0..p {
            for j in 0..p {
                let o = overlap(&b0.column(i), &b1.column(j));
                ensure((o - 1.0 / p as f64).abs() <= EXACT_TOL, format!("p={p}: overlap {o}"))?;
            }
        }
        notes.push(format!("p={p}: {} bases", p + 1));
    }
    let cfg = SearchConfig::default().with_seed(5).with_restarts(8).with_grad_tol(SEARCH_GRAD_TOL);
    let k3 = search_mub(6, 3, &cfg).map_err(|e| e.to_string())?;
    let r3 = k3.reported["verify_residual"];
    ensure(r3 <= MUB6_RESIDUAL, format!("d=6 K=3 residual {r3:.2e} > {MUB6_RESIDUAL:e}"))?;
    let k4 = search_mub(6, 4, &SearchConfig::default().with_seed(5).with_restarts(8).with_max_iters(2000))
        .map_err(|e| e.to_string())?;
    ensure(k4.verdict.is_none(), format!("d=6 K=4 carries verdict {:?}", k4.verdict))?;
    Ok(format!(
        "{} at {EXACT_TOL:e}; d=6 K=3 residual {r3:.2e} <= {MUB6_RESIDUAL:e}; d=6 K=4 best residual {:.3e}, no verdict",
        notes.join(", "),
        k4.reported["verify_residual"]
    ))
}

fn criterion_4() -> Verdict {
    ensure(graeco_latin(6).is_err(), "graeco_latin(6) returned a pair".into())?;
    let (a, b) = card_square();
    let card = verify_graeco_latin(&a, &b).unwrap();
    ensure(card.passed, "card square rejected".into())?;

    let (a3, b3) = graeco_latin(3).unwrap();
    let table = QuantumLatinTable::from_pair(&a3, &b3).unwrap();
    let oqls = verify_oqls(&table, EULER_TOL).unwrap();
    let u = permutation_from_pair(&a3, &b3).unwrap();
    let two = verify_two_unitary(&u, 3, EULER_TOL).unwrap();
    let perfect = verify_perfect_tensor(&tensor_from_unitary(&u), 3, EULER_TOL).unwrap();
    ensure(oqls.passed && two.passed && perfect.passed, "d=3 OQLS chain failed".into())?;
    let ame = verify_ame(&ame_4_3(), AME_TOL).unwrap();
    ensure(ame.passed, format!("AME(4,3) residual {:.2e}", ame.max_residual))?;

    let qubit = search_two_unitary(2, &SearchConfig::default().with_seed(2).with_restarts(100).with_max_iters(U36_ITERS))
        .map_err(|e| e.to_string())?;
    let floor = qubit
        .restart_summaries
        .iter()
        .map(|r| r.best_value.unwrap_or(f64::NAN))
        .fold(f64::INFINITY, f64::min);
    ensure(qubit.restart_summaries.len() == 100, "d=2 search ran fewer restarts".into())?;
    ensure(floor > QUBIT_STALL_FLOOR, format!("d=2 search reached {floor:.2e}"))?;

    let start = Instant::now();
    let big = search_two_unitary(
        6,
        &SearchConfig::default().with_seed(36).with_restarts(U36_RESTARTS).with_max_iters(U36_ITERS),
    )
    .map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(big.restart_summaries.len() >= U36_RESTARTS, "U(36) search ran fewer restarts".into())?;
    ensure(secs < U36_SECONDS, format!("U(36) search took {secs:.0}s"))?;
    ensure(big.verdict.is_none(), "U(36) search carries a verdict".into())?;
    Ok(format!(
        "graeco_latin(6) errors; card square passes; d=3 OQLS/2-unitary/perfect tensor pass at {EULER_TOL:e}; \
         AME(4,3) residual {:.1e}; d=2 min objective over 100 restarts {floor:.3} > {QUBIT_STALL_FLOOR:e}; \
         U(36) {U36_RESTARTS} restarts x {U36_ITERS} iterations in {secs:.0}s, best residual {:.4e}, no verdict",
        ame.max_residual,
        big.reported["verify_residual"]
    ))
}

/// Werner state and its partial transpose assembled entrywise.
fn werner_pt_by_hand(d: usize, alpha: f64) -> (ComplexMatrix, ComplexMatrix) {
    let norm = (d * d) as f64 + alpha * d as f64;
    let entry = |r: usize, c: usize| {
        let (i, j, k, l) = (r / d, r % d, c / d, c % d);
        let id = if i == k && j == l { 1.0 } else { 0.0 };
        let swap = if i == l && j == k { alpha } else { 0.0 };
        c64((id + swap) / norm, 0.0)
    };
    let rho = ComplexMatrix::from_fn(d * d, d * d, entry);
    let pt = ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let (i, j, k, l) = (r / d, r % d, c / d, c % d);
        entry(i * d + l, k * d + j)
    });
    (rho, pt)
}

fn criterion_5() -> Verdict {
    let mut worst = 0.0f64;
    let mut points = 0;
    for d in 2..=6usize {
        for k in 0..10 {
            let alpha = -1.0 + 2.0 * k as f64 / 9.0;
            let (rho, pt) = werner_pt_by_hand(d, alpha);
            let lib = werner(d, alpha).unwrap();
            ensure(lib.rho.matrix().max_abs_diff(&rho) <= WERNER_TOL, format!("werner({d}, {alpha}) differs"))?;
            let lib_pt = partial_transpose(lib.rho.matrix(), d, d).unwrap();
            ensure(lib_pt.max_abs_diff(&pt) <= WERNER_TOL, format!("partial transpose at d={d} differs"))?;
            let numeric = hermitian_eigenvalues(&pt).unwrap();
            let analytic = werner_pt_spectrum(d, alpha).unwrap().expanded();
            for (x, y) in numeric.iter().zip(&analytic) {
                worst = worst.max((x - y).abs());
            }
            points += 1;
        }
    }
    ensure(points == 50, format!("{points} grid points"))?;
    ensure(worst <= WERNER_TOL, format!("spectrum mismatch {worst:.2e}"))?;

    for d in 2..=6usize {
        let edge = -1.0 / d as f64;
        let below = classify_werner(d, edge - BOUNDARY_OFFSET).unwrap();
        let above = classify_werner(d, edge + BOUNDARY_OFFSET).unwrap();
        ensure(below != WernerClass::Ppt, format!("d={d}: NPT missed just below -1/d"))?;
        ensure(above == WernerClass::Ppt, format!("d={d}: NPT reported just above -1/d"))?;
        ensure(
            werner_pt_spectrum(d, edge - BOUNDARY_OFFSET).unwrap().lambda_min < 0.0
                && werner_pt_spectrum(d, edge + BOUNDARY_OFFSET).unwrap().lambda_min > 0.0,
            format!("d={d}: lambda_min sign does not flip at -1/d"),
        )?;
    }

    let (_, pt) = werner_pt_by_hand(4, -0.5);
    let scaled = partial_transpose(werner(4, -0.5).unwrap().rho.matrix(), 4, 4).unwrap().scale_real(14.0);
    ensure(scaled.max_abs_diff(&pt.scale_real(14.0)) <= WERNER_TOL, "14 rho^G differs from the hand-built one".into())?;
    let defect = scaled.unitarity_defect();
    let ev = hermitian_eigenvalues(&scaled).unwrap();
    let spec_err = ev.iter().enumerate().map(|(k, v)| (v - if k == 0 { -1.0 } else { 1.0 }).abs()).fold(0.0, f64::max);
    ensure(defect <= WERNER_TOL, format!("14 rho^G unitarity defect {defect:.2e}"))?;
    ensure(spec_err <= WERNER_TOL, format!("14 rho^G spectrum off by {spec_err:.2e}"))?;
    Ok(format!(
        "50-point grid max deviation {worst:.1e} <= {WERNER_TOL:e}; boundary -1/d resolved at +-{BOUNDARY_OFFSET:e} for d=2..6; \
         14 rho^G unitary (defect {defect:.1e}), spectrum {{-1, +1 x15}} within {spec_err:.1e}"
    ))
}

fn random_rows(rng: &mut qconstell::random::SeededRng, side: usize) -> ComplexMatrix {
    let u = haar_unitary(rng, side);
    ComplexMatrix::from_fn(2, side, |i, j| u[(i, j)])
}

fn criterion_6() -> Verdict {
    let witness = search_distillable(4, -0.6, 1, &SearchConfig::default().with_seed(3).with_restarts(10))
        .map_err(|e| e.to_string())?;
    ensure(witness.best_value <= WITNESS_VALUE, format!("alpha=-0.6 best {:.5}", witness.best_value))?;
    let closed_form = -0.2 / 13.6;

    let window = search_distillable(4, -0.5, 1, &SearchConfig::default().with_seed(4).with_restarts(DISTILL_RESTARTS))
        .map_err(|e| e.to_string())?;
    ensure(window.restart_summaries.len() == DISTILL_RESTARTS, "alpha=-0.5 ran fewer restarts".into())?;
    let lowest = window
        .restart_summaries
        .iter()
        .map(|r| r.best_value.unwrap_or(f64::NEG_INFINITY))
        .fold(f64::INFINITY, f64::min);
    ensure(lowest >= NONDISTILLABLE_FLOOR, format!("alpha=-0.5 n=1 reached {lowest:.2e}"))?;

    let start = Instant::now();
    let two = search_distillable(4, -0.5, 2, &SearchConfig::default().with_seed(7).with_restarts(10).with_max_iters(500))
        .map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= TWO_COPY_SECONDS, format!("two-copy run took {secs:.0}s"))?;
    ensure(two.verdict.as_deref() == Some("open"), format!("two-copy verdict {:?}", two.verdict))?;
    ensure(two.best_value.is_finite(), "two-copy best value missing".into())?;
    let _: SearchCertificate = serde_json::from_str(&serde_json::to_string(&two).unwrap()).unwrap();

    let mut rng = rng_from_seed(606);
    let mut worst = 0.0f64;
    for t in 0..COMPRESSION_TRIALS {
        let d = 2 + t % 2;
        let side = d * d;
        let g = ComplexMatrix::from_vec(side, side, complex_normal_vec(&mut rng, side * side)).unwrap();
        let m = g.matmul(&g.adjoint());
        let tr = m.trace().re;
        let rho = DensityMatrix::new(vec![d, d], m.scale_real(1.0 / tr).hermitian_part()).unwrap();
        let probe = qconstell::entanglement::DistillProbe::new(d, 1, random_rows(&mut rng, d), random_rows(&mut rng, d))
            .unwrap();
        let mut compressed = hermitian_eigenvalues(&compressed_matrix(&rho, &probe).unwrap()).unwrap();
        compressed.extend(std::iter::repeat_n(0.0, side - 4));
        compressed.sort_by(f64::total_cmp);
        let full = projected_spectrum_full(&rho, &probe).unwrap();
        ensure(full.len() == compressed.len(), "spectrum lengths differ".into())?;
        for (x, y) in full.iter().zip(&compressed) {
            worst = worst.max((x - y).abs());
        }
    }
    ensure(worst <= COMPRESSION_TOL, format!("compression mismatch {worst:.2e}"))?;
    Ok(format!(
        "alpha=-0.6 best {:.6} <= {WITNESS_VALUE} (closed form {closed_form:.6}); alpha=-0.5 n=1 lowest over {DISTILL_RESTARTS} \
         restarts {lowest:.2e} >= {NONDISTILLABLE_FLOOR:e}; n=2 best {:.4e}, verdict open, {secs:.1}s; \
         compression max deviation {worst:.1e} over {COMPRESSION_TRIALS} trials",
        witness.best_value, two.best_value
    ))
}

fn criterion_7() -> Verdict {
    let mut rng = rng_from_seed(707);
    let mut max = f64::NEG_INFINITY;
    for _ in 0..NORMAL_SAMPLES {
        let inst = random_normal_instance(&mut rng, 4).unwrap();
        max = max.max(ks_objective(&inst).unwrap());
    }
    ensure(max <= 0.5 + KS_BOUND_TOL, format!("normal instance reached {max}"))?;

    let q = ComplexMatrix::from_real_diagonal(&[0.25, -0.25, 0.0, 0.0]);
    let explicit = ks_objective(&KsInstance::new(q.clone(), q).unwrap()).unwrap();
    ensure((explicit - 0.5).abs() <= KS_EXPLICIT_TOL, format!("explicit instance gives {explicit}"))?;

    let general = ks_search_violation(
        KsMode::General,
        &SearchConfig::default().with_seed(1000).with_restarts(KS_RESTARTS).with_max_iters(KS_ITERS),
    )
    .map_err(|e| e.to_string())?;
    ensure(general.verdict.is_none(), format!("general search carries verdict {:?}", general.verdict))?;
    ensure(general.restart_summaries.len() == KS_RESTARTS, "general search ran fewer restarts".into())?;
    let found = general.reported["max_objective"];
    ensure(found.is_finite(), "general search reported no maximum".into())?;
    Ok(format!(
        "{NORMAL_SAMPLES} normal instances max {max:.4} <= 1/2 + {KS_BOUND_TOL:e}; explicit instance {explicit:.15}; \
         general search over {KS_RESTARTS} restarts max {found:.15}, no verdict"
    ))
}

fn criterion_8() -> Verdict {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../certificates");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    ensure(!files.is_empty(), "no shipped certificates".into())?;
    for f in &files {
        let v: serde_json::Value = serde_json::from_slice(&std::fs::read(f).unwrap()).unwrap();
        let cert: SearchCertificate = serde_json::from_value(v["certificate"].clone()).map_err(|e| e.to_string())?;
        let again = replay(&cert).map_err(|e| e.to_string())?;
        ensure(
            cert.same_best_value(&again),
            format!("{}: {} replayed as {}", f.display(), cert.best_value_bits, again.best_value_bits),
        )?;
    }
    Ok(format!("{} shipped certificates replay bit-identically", files.len()))
}

fn main() {
    let criteria: [(usize, fn() -> Verdict); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (k, f) in criteria {
        if only.is_some_and(|o| o != k) {
            continue;
        }
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(msg) => println!("PASS criterion {k}: {msg} [{secs:.1}s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {k}: {msg} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
