use std::collections::BTreeMap;

use qconstell::combinatorics::{
    ame4_from_two_unitary, ame_4_3, card_square, graeco_latin, permutation_from_pair, verify_ame,
    verify_graeco_latin, verify_latin, verify_oqls, verify_quantum_latin, verify_two_unitary, AmeCandidate,
    LatinSquare, QuantumLatinTable, TableMode,
};
use qconstell::constellations::{
    fourier, hesse_fiducial, mub_prime, sic_orbit, tetrahedron_fiducial, verify_complex_hadamard, verify_mub,
    verify_sic, MubObjective,
};
use qconstell::entanglement::{
    classify_werner, compressed_matrix, dichotomic_check, distill_value, eig_tolerance, ks_objective, werner,
    werner_pt_spectrum, DistillProbe, KsInstance, KsObjective,
};
use qconstell::search::manifold::point_to_complex;
use qconstell::search::{replay, run_search, KsMode, ProblemSpec, SearchCertificate, SearchConfig};
use qconstell::{CheckReport, ComplexMatrix, DensityMatrix, StateVector};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;
use crate::files::parse_input;
use crate::result::{Command, Outcome, Problem, ReplayCheck, Status};
use crate::Cli;

/// Verification tolerance when `--tol` is absent.
pub fn default_tolerance(problem: Problem) -> f64 {
    match problem {
        Problem::Latin => 0.0,
        Problem::Werner => 1e-12,
        _ => 1e-10,
    }
}

#[derive(Serialize, Deserialize)]
struct Pair<T> {
    a: T,
    b: T,
}

#[derive(Serialize, Deserialize)]
struct ProbeFile {
    p: ComplexMatrix,
    q: ComplexMatrix,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LatinInput {
    Pair(Pair<LatinSquare>),
    Single(LatinSquare),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SicInput {
    Orbit(Vec<StateVector>),
    Fiducial(StateVector),
}

fn need<T: Copy>(v: Option<T>, flag: &str, problem: Problem) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for problem {}", problem.name())))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("objects serialize")
}

fn report_outcome(rep: CheckReport, what: &str) -> Outcome {
    let status = if rep.passed { Status::Passed } else { Status::Failed };
    let line = format!(
        "{what}: {} (max residual {:.3e}, tolerance {:.1e})",
        if rep.passed { "PASS" } else { "FAIL" },
        rep.max_residual,
        rep.tolerance_used
    );
    Outcome { status: Some(status), summary: vec![line], report: Some(rep), ..Default::default() }
}

fn constructed(object: Value, rep: CheckReport, what: &str) -> Outcome {
    let mut o = report_outcome(rep, what);
    o.summary[0] = format!("constructed {what}; {}", o.summary[0]);
    // a construction that fails its own verifier is reported, not hidden
    if o.status == Some(Status::Passed) {
        o.status = Some(Status::Constructed);
    }
    o.object = Some(object);
    o
}

fn latin_pair(n: usize) -> Result<(LatinSquare, LatinSquare), CliError> {
    if n == 4 {
        Ok(card_square())
    } else {
        Ok(graeco_latin(n)?)
    }
}

fn check_dim(given: Option<usize>, actual: usize, what: &str) -> Result<(), CliError> {
    match given {
        Some(d) if d != actual => Err(CliError::Core(qconstell::Error::DimensionMismatch(format!(
            "--dim {d} but the input {what} has dimension {actual}"
        )))),
        _ => Ok(()),
    }
}

fn local_dim_of_square(side: usize) -> Result<usize, CliError> {
    let d = (side as f64).sqrt().round() as usize;
    if d * d != side {
        return Err(CliError::Core(qconstell::Error::DimensionMismatch(format!("side {side} is not a square"))));
    }
    Ok(d)
}

pub fn construct(cli: &Cli, problem: Problem, tol: f64) -> Result<Outcome, CliError> {
    let dim = cli.dim;
    Ok(match problem {
        Problem::Sic => {
            let f = match need(dim, "dim", problem)? {
                2 => tetrahedron_fiducial(),
                3 => hesse_fiducial(),
                n => {
                    return Err(CliError::Usage(format!(
                        "no closed-form fiducial is built in for dimension {n}; use `search --problem sic`"
                    )))
                }
            };
            let rep = verify_sic(&sic_orbit(&f)?, tol)?;
            constructed(to_value(&f), rep, "SIC fiducial")
        }
        Problem::Mub => {
            let set = mub_prime(need(dim, "dim", problem)?)?;
            let rep = verify_mub(&set.bases, tol)?;
            let mut o = constructed(to_value(&set.bases), rep, &format!("{} MUBs", set.bases.len()));
            o.figures.insert("bases".into(), set.bases.len() as f64);
            o
        }
        Problem::Hadamard => {
            let f = fourier(need(dim, "dim", problem)?);
            let rep = verify_complex_hadamard(&f, tol)?;
            constructed(to_value(&f), rep, "Fourier matrix")
        }
        Problem::Latin => {
            let (a, b) = latin_pair(need(dim, "dim", problem)?)?;
            let rep = verify_graeco_latin(&a, &b)?;
            constructed(to_value(&Pair { a, b }), rep, "Graeco-Latin square")
        }
        Problem::Oqls => {
            let (a, b) = latin_pair(need(dim, "dim", problem)?)?;
            let table = QuantumLatinTable::from_pair(&a, &b)?;
            let rep = verify_oqls(&table, tol)?;
            constructed(to_value(&table), rep, "orthogonal quantum Latin square")
        }
        Problem::TwoUnitary => {
            let d = need(dim, "dim", problem)?;
            let (a, b) = latin_pair(d)?;
            let u = permutation_from_pair(&a, &b)?;
            let rep = verify_two_unitary(&u, d, tol)?;
            constructed(to_value(&u), rep, "2-unitary permutation")
        }
        Problem::Ame => {
            let d = need(dim, "dim", problem)?;
            let c = if d == 3 {
                ame_4_3()
            } else {
                let (a, b) = latin_pair(d)?;
                ame4_from_two_unitary(&permutation_from_pair(&a, &b)?, d)?
            };
            let rep = verify_ame(&c, tol)?;
            constructed(to_value(&c.state), rep, "AME(4, d) state")
        }
        Problem::Werner => {
            let d = need(dim, "dim", problem)?;
            let alpha = need(cli.alpha, "alpha", problem)?;
            let w = werner(d, alpha)?;
            let spectrum = werner_pt_spectrum(d, alpha)?;
            let class = classify_werner(d, alpha)?;
            let labels: Vec<String> = class.labels().iter().map(|s| s.to_string()).collect();
            let mut o = Outcome {
                status: Some(Status::Constructed),
                summary: vec![
                    format!("constructed Werner state d = {d}, alpha = {alpha}"),
                    format!("lambda_min of the partial transpose: {:.6e}", spectrum.lambda_min),
                    format!("labels: {}", labels.join(", ")),
                ],
                object: Some(to_value(&w.rho)),
                labels,
                ..Default::default()
            };
            o.figures.insert("lambda_min".into(), spectrum.lambda_min);
            o
        }
        Problem::Distill => {
            let d = need(dim, "dim", problem)?;
            let n = cli.copies.unwrap_or(1);
            let probe = DistillProbe::computational(d, n)?;
            let mut o = Outcome {
                status: Some(Status::Constructed),
                summary: vec![format!("constructed computational probe for d = {d}, n = {n}")],
                object: Some(to_value(&ProbeFile { p: probe.p.clone(), q: probe.q.clone() })),
                ..Default::default()
            };
            if let Some(alpha) = cli.alpha {
                let v = distill_value(&werner(d, alpha)?.rho, n, &probe)?;
                o.summary.push(format!("distill value at alpha = {alpha}: {v:.6e}"));
                o.figures.insert("distill_value".into(), v);
            }
            o
        }
        Problem::Ksum => {
            let q = ComplexMatrix::from_real_diagonal(&[0.25, -0.25, 0.0, 0.0]);
            let inst = KsInstance::new(q.clone(), q)?;
            let v = ks_objective(&inst)?;
            let mut o = Outcome {
                status: Some(Status::Constructed),
                summary: vec![format!("constructed A = B = diag(1, -1, 0, 0)/4; sigma1^2 + sigma2^2 = {v:.15}")],
                object: Some(to_value(&Pair { a: inst.a, b: inst.b })),
                ..Default::default()
            };
            o.figures.insert("ks_objective".into(), v);
            o
        }
        Problem::Dichotomic => {
            return Err(CliError::Usage(
                "dichotomic is a check only; construct a Werner state and verify it instead".into(),
            ))
        }
    })
}

pub fn verify(cli: &Cli, problem: Problem, tol: f64, input: &[u8]) -> Result<Outcome, CliError> {
    let dim = cli.dim;
    Ok(match problem {
        Problem::Sic => {
            let vectors = match parse_input::<SicInput>(input, "object", "a fiducial state or a list of states")? {
                SicInput::Fiducial(f) => {
                    check_dim(dim, f.dim(), "fiducial")?;
                    sic_orbit(&f)?
                }
                SicInput::Orbit(v) => {
                    if let Some(first) = v.first() {
                        check_dim(dim, first.dim(), "states")?;
                    }
                    v
                }
            };
            report_outcome(verify_sic(&vectors, tol)?, "SIC")
        }
        Problem::Mub => {
            let bases: Vec<ComplexMatrix> = parse_input(input, "object", "a list of matrices")?;
            if let Some(b) = bases.first() {
                check_dim(dim, b.rows(), "bases")?;
            }
            report_outcome(verify_mub(&bases, tol)?, "MUB")
        }
        Problem::Hadamard => {
            let h: ComplexMatrix = parse_input(input, "object", "a matrix")?;
            check_dim(dim, h.rows(), "matrix")?;
            report_outcome(verify_complex_hadamard(&h, tol)?, "complex Hadamard")
        }
        Problem::Latin => match parse_input::<LatinInput>(input, "object", "a Latin square or a pair {a, b}")? {
            LatinInput::Single(sq) => {
                check_dim(dim, sq.order(), "square")?;
                report_outcome(verify_latin(&sq), "Latin square")
            }
            LatinInput::Pair(Pair { a, b }) => {
                check_dim(dim, a.order(), "square")?;
                report_outcome(verify_graeco_latin(&a, &b)?, "Graeco-Latin square")
            }
        },
        Problem::Oqls => {
            let table: QuantumLatinTable = parse_input(input, "object", "a quantum Latin table")?;
            check_dim(dim, table.order, "table")?;
            match table.mode {
                TableMode::Bipartite => report_outcome(verify_oqls(&table, tol)?, "OQLS"),
                TableMode::SingleSpace => report_outcome(verify_quantum_latin(&table, tol)?, "quantum Latin square"),
            }
        }
        Problem::TwoUnitary => {
            let u: ComplexMatrix = parse_input(input, "object", "a matrix")?;
            let d = local_dim_of_square(u.rows())?;
            check_dim(dim, d, "matrix")?;
            report_outcome(verify_two_unitary(&u, d, tol)?, "2-unitary")
        }
        Problem::Ame => {
            let s: StateVector = parse_input(input, "object", "a state with dims")?;
            let c = AmeCandidate::new(s)?;
            check_dim(dim, c.local_dim, "state")?;
            report_outcome(verify_ame(&c, tol)?, "AME")
        }
        Problem::Werner => {
            let rho: DensityMatrix = parse_input(input, "object", "a density matrix with dims")?;
            let (d, _) = rho.bipartite_dims()?;
            check_dim(dim, d, "state")?;
            let alpha = need(cli.alpha, "alpha", problem)?;
            let w = werner(d, alpha)?;
            let (dev, i, j) = (rho.matrix() - w.rho.matrix()).argmax_abs();
            let mut o = report_outcome(CheckReport::new(dev, vec![vec![i, j]], tol), "Werner state");
            o.labels = classify_werner(d, alpha)?.labels().iter().map(|s| s.to_string()).collect();
            o
        }
        Problem::Dichotomic => {
            let rho: DensityMatrix = parse_input(input, "object", "a density matrix with dims")?;
            check_dim(dim, rho.bipartite_dims()?.0, "state")?;
            report_outcome(dichotomic_check(&rho, tol)?, "dichotomic partial transpose")
        }
        Problem::Distill => {
            let f: ProbeFile = parse_input(input, "object", "a probe {p, q}")?;
            let d = need(dim, "dim", problem)?;
            let alpha = need(cli.alpha, "alpha", problem)?;
            let n = cli.copies.unwrap_or(1);
            let probe = DistillProbe::new(d, n, f.p, f.q)?;
            let rho = werner(d, alpha)?.rho;
            let value = distill_value(&rho, n, &probe)?;
            let tol_eig = eig_tolerance(&compressed_matrix(&rho, &probe)?)?;
            // passes when the probe is a distillability witness
            let mut o = report_outcome(CheckReport::new(value, vec![], -10.0 * tol_eig), "distillability witness");
            o.figures.insert("distill_value".into(), value);
            o.figures.insert("tol_eig".into(), tol_eig);
            o
        }
        Problem::Ksum => {
            let p: Pair<ComplexMatrix> = parse_input(input, "object", "a pair {a, b}")?;
            let inst = KsInstance::new(p.a, p.b)?;
            let v = ks_objective(&inst)?;
            // residual is the excess over the bound
            let mut o = report_outcome(CheckReport::new(v - 0.5, vec![], tol), "Kronecker-sum bound");
            o.figures.insert("ks_objective".into(), v);
            o
        }
    })
}

pub fn search_config(cli: &Cli) -> SearchConfig {
    let mut cfg = SearchConfig::default();
    if let Some(s) = cli.seed {
        cfg = cfg.with_seed(s);
    }
    if let Some(r) = cli.restarts {
        cfg = cfg.with_restarts(r);
    }
    if let Some(b) = cli.budget {
        cfg = cfg.with_max_iters(b);
    }
    if let Some(t) = cli.tol {
        cfg = cfg.with_grad_tol(t);
    }
    cfg
}

pub fn problem_spec(cli: &Cli, problem: Problem) -> Result<ProblemSpec, CliError> {
    Ok(match problem {
        Problem::Sic => ProblemSpec::Sic { dim: need(cli.dim, "dim", problem)? },
        Problem::Mub => ProblemSpec::Mub { dim: need(cli.dim, "dim", problem)?, bases: cli.bases.unwrap_or(3) },
        Problem::TwoUnitary => ProblemSpec::TwoUnitary { d: need(cli.dim, "dim", problem)? },
        Problem::Distill => ProblemSpec::Distill {
            d: need(cli.dim, "dim", problem)?,
            alpha: need(cli.alpha, "alpha", problem)?,
            copies: cli.copies.unwrap_or(1),
        },
        Problem::Ksum => ProblemSpec::Ksum { mode: cli.mode.unwrap_or(KsMode::General) },
        other => return Err(CliError::Usage(format!("problem {} has no search", other.name()))),
    })
}

/// The best point of a certificate in the matrix/state schema.
pub fn best_object(cert: &SearchCertificate) -> Option<Value> {
    if cert.best_point.is_empty() {
        return None;
    }
    let x = &cert.best_point;
    match &cert.problem {
        ProblemSpec::Sic { dim } => StateVector::normalized(vec![*dim], point_to_complex(x)).ok().map(|s| to_value(&s)),
        ProblemSpec::Mub { dim, bases } => Some(to_value(&MubObjective { dim: *dim, bases: *bases }.bases_at(x))),
        ProblemSpec::TwoUnitary { d } => {
            ComplexMatrix::from_vec(d * d, d * d, point_to_complex(x)).ok().map(|u| to_value(&u))
        }
        ProblemSpec::Distill { d, copies, .. } => {
            DistillProbe::from_point(*d, *copies, x).ok().map(|p| to_value(&ProbeFile { p: p.p, q: p.q }))
        }
        ProblemSpec::Ksum { mode } => {
            let inst = KsObjective::new(*mode).instance_at(x);
            Some(to_value(&Pair { a: inst.a, b: inst.b }))
        }
        ProblemSpec::Custom { .. } => None,
    }
}

fn certificate_outcome(cert: SearchCertificate) -> Outcome {
    let mut summary = vec![
        format!("problem: {}", serde_json::to_string(&cert.problem).unwrap_or_default()),
        format!("best value {:.6e} ({}) from restart {:?}", cert.best_value, cert.best_value_bits, cert.best_restart),
    ];
    for (k, v) in &cert.reported {
        summary.push(format!("{k}: {v:.6e}"));
    }
    summary.push(format!("verdict: {}", cert.verdict.as_deref().unwrap_or("none")));
    Outcome {
        status: Some(Status::Completed),
        summary,
        object: best_object(&cert),
        figures: cert.reported.clone(),
        certificate: Some(cert),
        ..Default::default()
    }
}

pub fn search(cli: &Cli, problem: Problem) -> Result<Outcome, CliError> {
    let spec = problem_spec(cli, problem)?;
    let cert = run_search(&spec, &search_config(cli))?;
    Ok(certificate_outcome(cert))
}

pub fn replay_certificate(input: &[u8]) -> Result<Outcome, CliError> {
    let original: SearchCertificate = parse_input(input, "certificate", "a search certificate")?;
    let again = replay(&original)?;
    let check = ReplayCheck {
        original_bits: original.best_value_bits.clone(),
        replayed_bits: again.best_value_bits.clone(),
        identical: original.same_best_value(&again),
    };
    let mut o = certificate_outcome(again);
    o.status = Some(if check.identical { Status::Reproduced } else { Status::Diverged });
    o.summary.push(format!(
        "replay: {} (original {}, replayed {})",
        if check.identical { "bit-identical" } else { "DIVERGED" },
        check.original_bits,
        check.replayed_bits
    ));
    o.replay = Some(check);
    Ok(o)
}

pub fn execute(cli: &Cli, input: Option<&[u8]>) -> Result<Outcome, CliError> {
    let need_input = || input.ok_or_else(|| CliError::Usage("--input is required for this command".into()));
    if cli.command == Command::Replay {
        return replay_certificate(need_input()?);
    }
    let problem = cli.problem.ok_or_else(|| CliError::Usage("--problem is required".into()))?;
    let tol = cli.tol.unwrap_or_else(|| default_tolerance(problem));
    match cli.command {
        Command::Construct => construct(cli, problem, tol),
        Command::Verify => verify(cli, problem, tol, need_input()?),
        Command::Search => search(cli, problem),
        Command::Replay => unreachable!(),
    }
}

/// Tolerances that enter the run, for the configuration echo.
pub fn echoed_tolerances(cli: &Cli) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    if let Some(t) = cli.tol {
        let key = if cli.command == Command::Search { "grad_tol" } else { "verify" };
        out.insert(key.to_string(), t);
    }
    out
}
