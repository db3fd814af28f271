//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! failure status if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use channelforge::bipartite::{bell_state, swap_operator};
use channelforge::matrix::{CMatrix, C64, ONE};
use channelforge::random::{gaussian_matrix, random_cptp, random_density_matrix, seeded_rng, ChannelRng};
use channelforge::representations::{
    apply_chi, apply_choi, apply_kraus, apply_superop, apply_sysenv, Channel, StinespringRep, SuperOp,
};
use channelforge::transforms::{
    chi_to_choi, choi_to_chi, choi_to_kraus, choi_to_superop, default_chi_basis, kraus_list_diff, kraus_to_choi,
    kraus_to_stinespring, kraus_to_superop, superop_to_choi, sysenv_to_choi, sysenv_to_kraus, sysenv_to_superop,
    DEFAULT_RANK_TOL,
};
use channelforge::vectorize::{
    basis_change_op, elementary_basis, pauli_basis, roth_vec, vec, VecConvention, DEFAULT_TOL,
};
use rand::Rng;

const TRIALS: usize = 200;

struct Sample {
    d: usize,
    rank: usize,
    se: StinespringRep,
}

/// 200 channels cycling through d = 2, 3, 4 with Kraus rank 1..=d^2.
fn samples() -> Vec<Sample> {
    let mut rng = seeded_rng(20_240_601);
    (0..TRIALS)
        .map(|i| {
            let d = 2 + i % 3;
            let rank = 1 + (i / 3) % (d * d);
            let se = random_cptp(d, d, rank, &mut rng).expect("valid parameters");
            Sample { d, rank, se }
        })
        .collect()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn max_pairwise(mats: &[CMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in mats.iter().enumerate() {
        for b in &mats[i + 1..] {
            worst = worst.max(a.max_abs_diff(b));
        }
    }
    worst
}

fn commuting_diagram(samples: &[Sample]) -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for s in samples {
        let k = sysenv_to_kraus(&s.se, None).unwrap();
        let lam_se = sysenv_to_choi(&s.se).unwrap();
        let lam_k = kraus_to_choi(&k).unwrap();
        let s_se = sysenv_to_superop(&s.se).unwrap();
        let s_k = kraus_to_superop(&k).unwrap();
        let canon = choi_to_kraus(&lam_k, DEFAULT_RANK_TOL, DEFAULT_TOL).unwrap();
        let chi = choi_to_chi(&lam_se, &default_chi_basis(s.d, s.d).unwrap()).unwrap();
        let lam_chi = chi_to_choi(&chi).unwrap();
        let dilated = kraus_to_stinespring(&canon, None).unwrap();

        let superops = [
            s_se.mat().clone(),
            s_k.mat().clone(),
            choi_to_superop(&lam_se).unwrap().mat().clone(),
            choi_to_superop(&lam_k).unwrap().mat().clone(),
            choi_to_superop(&lam_chi).unwrap().mat().clone(),
            kraus_to_superop(&canon).unwrap().mat().clone(),
            sysenv_to_superop(&dilated).unwrap().mat().clone(),
        ];
        let chois = [
            lam_se.mat().clone(),
            lam_k.mat().clone(),
            lam_chi.mat().clone(),
            superop_to_choi(&s_se).unwrap().mat().clone(),
            superop_to_choi(&s_k).unwrap().mat().clone(),
            kraus_to_choi(&canon).unwrap().mat().clone(),
            sysenv_to_choi(&dilated).unwrap().mat().clone(),
        ];
        worst = worst.max(max_pairwise(&superops)).max(max_pairwise(&chois));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-9 && secs < 30.0,
        format!("max path disagreement {worst:.2e} (bound 1e-9), {secs:.2} s (bound 30 s)"),
    )
}

fn evolution_equivalence(samples: &[Sample]) -> Outcome {
    let mut rng = seeded_rng(77);
    let mut worst_agree: f64 = 0.0;
    let mut worst_trace: f64 = 0.0;
    for s in samples {
        let k = sysenv_to_kraus(&s.se, None).unwrap();
        let sup = sysenv_to_superop(&s.se).unwrap();
        let lam = superop_to_choi(&sup).unwrap();
        let chi = choi_to_chi(&lam, &default_chi_basis(s.d, s.d).unwrap()).unwrap();
        for _ in 0..10 {
            let rho = random_density_matrix(s.d, &mut rng).unwrap();
            let outs = [
                apply_kraus(&k, &rho).unwrap().into_mat(),
                apply_superop(&sup, &rho).unwrap().into_mat(),
                apply_choi(&lam, &rho).unwrap().into_mat(),
                apply_chi(&chi, &rho).unwrap().into_mat(),
                apply_sysenv(&s.se, &rho).unwrap().into_mat(),
            ];
            worst_agree = worst_agree.max(max_pairwise(&outs));
            for o in &outs {
                worst_trace = worst_trace.max((o.trace().unwrap() - ONE).norm());
            }
        }
    }
    outcome(
        worst_agree <= 1e-9 && worst_trace <= 1e-10,
        format!(
            "max route disagreement {worst_agree:.2e} (bound 1e-9), max trace error {worst_trace:.2e} (bound 1e-10)"
        ),
    )
}

fn round_trips(samples: &[Sample]) -> Outcome {
    let mut reshuffle_exact = true;
    let mut worst_kraus: f64 = 0.0;
    let mut worst_chi: f64 = 0.0;
    for s in samples {
        let sup = sysenv_to_superop(&s.se).unwrap();
        reshuffle_exact &= choi_to_superop(&superop_to_choi(&sup).unwrap()).unwrap() == sup;
        let lam = sysenv_to_choi(&s.se).unwrap();
        reshuffle_exact &= superop_to_choi(&choi_to_superop(&lam).unwrap()).unwrap() == lam;

        let k = choi_to_kraus(&lam, DEFAULT_RANK_TOL, DEFAULT_TOL).unwrap();
        worst_kraus = worst_kraus.max(kraus_to_choi(&k).unwrap().mat().max_abs_diff(lam.mat()));

        for basis in [
            default_chi_basis(s.d, s.d).unwrap(),
            elementary_basis(s.d, s.d).unwrap(),
        ] {
            let back = chi_to_choi(&choi_to_chi(&lam, &basis).unwrap()).unwrap();
            worst_chi = worst_chi.max(back.mat().max_abs_diff(lam.mat()));
        }
    }
    outcome(
        reshuffle_exact && worst_kraus <= 1e-10 && worst_chi <= 1e-12,
        format!(
            "reshuffle round trip exact: {reshuffle_exact}, kraus {worst_kraus:.2e} (bound 1e-10), chi {worst_chi:.2e} (bound 1e-12)"
        ),
    )
}

fn canonical_kraus(samples: &[Sample]) -> Outcome {
    let mut worst_orth: f64 = 0.0;
    let mut worst_complete: f64 = 0.0;
    let mut rank_mismatches = 0;
    for s in samples {
        let lam = sysenv_to_choi(&s.se).unwrap();
        let eig = lam.spectrum(DEFAULT_TOL).unwrap();
        let k = choi_to_kraus(&lam, DEFAULT_RANK_TOL, DEFAULT_TOL).unwrap();
        for (a, ka) in k.ops().iter().enumerate() {
            for (b, kb) in k.ops().iter().enumerate() {
                let gram = ka.adjoint().mat_mul(kb).unwrap().trace().unwrap();
                let expect = if a == b { eig.eigenvalues[a] } else { 0.0 };
                worst_orth = worst_orth.max((gram - C64::new(expect, 0.0)).norm());
            }
        }
        worst_complete = worst_complete.max(k.completeness_sum().distance(&CMatrix::identity(s.d)));
        // A generic Stinespring isometry with environment dimension r has
        // Choi rank exactly r.
        if k.len() != s.rank {
            rank_mismatches += 1;
        }
    }
    outcome(
        worst_orth <= 1e-10 && worst_complete <= 1e-9 && rank_mismatches == 0,
        format!(
            "orthogonality {worst_orth:.2e} (bound 1e-10), completeness {worst_complete:.2e} (bound 1e-9), rank mismatches {rank_mismatches}/{TRIALS}"
        ),
    )
}

fn cp_discrimination(samples: &[Sample]) -> Outcome {
    let transpose = SuperOp::col(swap_operator(2, 2), 2, 2).unwrap();
    let lam = superop_to_choi(&transpose).unwrap();
    let chi = choi_to_chi(&lam, &pauli_basis(1).unwrap()).unwrap();
    let checks = [
        transpose.check_cp(DEFAULT_TOL).unwrap(),
        lam.check_cp(DEFAULT_TOL).unwrap(),
        chi.check_cp(DEFAULT_TOL).unwrap(),
    ];
    let rejected = checks
        .iter()
        .all(|c| !c.passed && c.witness.is_some_and(|w| (w + 1.0).abs() <= 1e-10));
    let witness = checks[0].witness.unwrap_or(f64::NAN);

    let mut accepted = 0;
    for s in samples {
        let sup = sysenv_to_superop(&s.se).unwrap();
        let lam = superop_to_choi(&sup).unwrap();
        let chi = choi_to_chi(&lam, &default_chi_basis(s.d, s.d).unwrap()).unwrap();
        let k = sysenv_to_kraus(&s.se, None).unwrap();
        if s.se.is_cp(DEFAULT_TOL)
            && k.is_cp(DEFAULT_TOL)
            && sup.is_cp(DEFAULT_TOL)
            && lam.is_cp(DEFAULT_TOL)
            && chi.is_cp(DEFAULT_TOL)
        {
            accepted += 1;
        }
    }
    outcome(
        rejected && accepted == TRIALS,
        format!("transpose map rejected in superop/choi/chi routes: {rejected} (witness {witness:.12}), random CPTP accepted {accepted}/{TRIALS}"),
    )
}

fn random_dims(rng: &mut ChannelRng) -> usize {
    rng.random_range(1..=4)
}

fn integer_matrix(d: usize, rng: &mut ChannelRng) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| {
        C64::new(rng.random_range(-9..=9) as f64, rng.random_range(-9..=9) as f64)
    })
}

fn vectorization_identities() -> Outcome {
    let mut rng = seeded_rng(6);
    let mut worst_roth: f64 = 0.0;
    for _ in 0..TRIALS {
        let (p, q, r, s) = (
            random_dims(&mut rng),
            random_dims(&mut rng),
            random_dims(&mut rng),
            random_dims(&mut rng),
        );
        let a = gaussian_matrix(p, q, &mut rng);
        let b = gaussian_matrix(q, r, &mut rng);
        let c = gaussian_matrix(r, s, &mut rng);
        worst_roth = worst_roth.max(roth_vec(&a, &b, &c).unwrap().max_abs_diff());
    }

    let mut bell_exact = true;
    for d in 1..=4 {
        let phi = bell_state(d).unwrap();
        let id = CMatrix::identity(d);
        for _ in 0..10 {
            let a = integer_matrix(d, &mut rng);
            let row = a.kron(&id).mat_vec(&phi).unwrap();
            let col = id.kron(&a).mat_vec(&phi).unwrap();
            bell_exact &= vec(&a, &VecConvention::Row).unwrap() == row;
            bell_exact &= vec(&a, &VecConvention::Col).unwrap() == col;
        }
    }

    let mut swap_exact = true;
    for dx in 1..=4 {
        for dy in 1..=4 {
            // SWAP |i> ⊗ |j> = |j> ⊗ |i> for |i> in C^dx, |j> in C^dy.
            let mut swap = CMatrix::zeros(dx * dy, dx * dy);
            for i in 0..dx {
                for j in 0..dy {
                    swap[(j * dx + i, i * dy + j)] = ONE;
                }
            }
            let t = basis_change_op(&VecConvention::Col, &VecConvention::Row, dx, dy).unwrap();
            swap_exact &= t == swap && swap_operator(dx, dy) == swap;
        }
    }
    outcome(
        worst_roth <= 1e-12 && bell_exact && swap_exact,
        format!(
            "roth {worst_roth:.2e} (bound 1e-12), bell forms exact: {bell_exact}, T_c->r == SWAP exactly: {swap_exact}"
        ),
    )
}

fn appendix_identities() -> Outcome {
    let mut rng = seeded_rng(7);
    let mut worst_snake: f64 = 0.0;
    let mut worst_trace: f64 = 0.0;
    for i in 0..TRIALS {
        let d = 1 + i % 5;
        let phi = CMatrix::column(&bell_state(d).unwrap());
        let id = CMatrix::identity(d);
        let m = gaussian_matrix(d, d, &mut rng);
        // (<Φ| ⊗ I)(M ⊗ |Φ>) = M
        let snake = phi.adjoint().kron(&id).mat_mul(&m.kron(&phi)).unwrap();
        worst_snake = worst_snake.max(snake.max_abs_diff(&m));
        // Tr A = <Φ|(A ⊗ I)|Φ> = <Φ|(I ⊗ A)|Φ>
        let tr = m.trace().unwrap();
        for lifted in [m.kron(&id), id.kron(&m)] {
            let g = phi.adjoint().mat_mul(&lifted).unwrap().mat_mul(&phi).unwrap()[(0, 0)];
            worst_trace = worst_trace.max((g - tr).norm());
        }
    }

    let mut worst_unitary: f64 = 0.0;
    for n in 1..=3 {
        let d = 1 << n;
        let elem = VecConvention::Basis(elementary_basis(d, d).unwrap());
        let pauli = VecConvention::Basis(pauli_basis(n).unwrap());
        for (from, to) in [(&elem, &pauli), (&pauli, &elem), (&VecConvention::Col, &pauli)] {
            let t = basis_change_op(from, to, d, d).unwrap();
            let defect = t.adjoint().mat_mul(&t).unwrap().distance(&CMatrix::identity(d * d));
            worst_unitary = worst_unitary.max(defect);
        }
    }
    outcome(
        worst_snake <= 1e-12 && worst_trace <= 1e-12 && worst_unitary <= 1e-10,
        format!(
            "snake {worst_snake:.2e} (bound 1e-12), graphical trace {worst_trace:.2e} (bound 1e-12), ||T^dagger T - I||_F {worst_unitary:.2e} (bound 1e-10)"
        ),
    )
}

fn stinespring_bijectivity(samples: &[Sample]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut length_mismatch = 0;
    for s in samples {
        // Canonical Kraus sets and raw environment blocks both go through.
        let lam = sysenv_to_choi(&s.se).unwrap();
        let lists = [
            sysenv_to_kraus(&s.se, None).unwrap(),
            choi_to_kraus(&lam, DEFAULT_RANK_TOL, DEFAULT_TOL).unwrap(),
        ];
        for k in &lists {
            let back = sysenv_to_kraus(&kraus_to_stinespring(k, None).unwrap(), None).unwrap();
            match kraus_list_diff(k, &back) {
                Some(diff) => worst = worst.max(diff),
                None => length_mismatch += 1,
            }
        }
    }
    outcome(
        worst <= 1e-12 && length_mismatch == 0,
        format!("max element difference {worst:.2e} (bound 1e-12), length mismatches {length_mismatch}"),
    )
}

fn chi_in_col_basis(samples: &[Sample]) -> Outcome {
    let mut worst: f64 = 0.0;
    for s in samples {
        let lam = sysenv_to_choi(&s.se).unwrap();
        let chi = choi_to_chi(&lam, &elementary_basis(s.d, s.d).unwrap()).unwrap();
        worst = worst.max(chi.mat().max_abs_diff(lam.mat()));
    }
    // Rectangular maps as well.
    let mut rng = seeded_rng(9);
    for (dx, dy) in [(2, 3), (3, 2), (1, 4)] {
        let se = random_cptp(dx, dy, 2, &mut rng).unwrap();
        let lam = sysenv_to_choi(&se).unwrap();
        let chi = choi_to_chi(&lam, &elementary_basis(dx, dy).unwrap()).unwrap();
        worst = worst.max(chi.mat().max_abs_diff(lam.mat()));
    }
    outcome(worst <= 1e-12, format!("max |chi - Λ| {worst:.2e} (bound 1e-12)"))
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_channelforge"))
        .args(args)
        .env_remove("CHANNELFORGE_TOL")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        out.stdout,
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn cli_end_to_end() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let p = |name: String| dir.path().join(name);
    let s = |path: &Path| path.to_str().unwrap().to_string();
    let mut failures = Vec::new();
    let targets = ["kraus", "superop", "choi", "chi", "stinespring"];
    for seed in 0..50u64 {
        let d = 2 + (seed % 2) as usize;
        let rank = 1 + (seed as usize / 2) % (d * d);
        let src = p(format!("random_{seed}.json"));
        let (dim, rank_s, seed_s) = (d.to_string(), rank.to_string(), seed.to_string());
        let gen = [
            "random",
            "--type",
            "cptp",
            "--dim",
            &dim,
            "--kraus-rank",
            &rank_s,
            "--seed",
            &seed_s,
        ];
        let (code, first, _) = run_cli(&gen);
        let (_, second, _) = run_cli(&gen);
        if code != 0 || first != second {
            failures.push(format!("seed {seed}: random not deterministic"));
            continue;
        }
        std::fs::write(&src, &first).unwrap();

        for target in targets {
            let dst = p(format!("seed{seed}_{target}.json"));
            let (code, _, err) = run_cli(&["convert", &s(&src), "--to", target, "-o", &s(&dst)]);
            if code != 0 {
                failures.push(format!("seed {seed}: convert to {target} exited {code}: {err}"));
                continue;
            }
            let (code, report, _) = run_cli(&["check", &s(&dst), "--cp", "--tp", "--hp"]);
            if code != 0 {
                failures.push(format!(
                    "seed {seed}: check {target}: {}",
                    String::from_utf8_lossy(&report)
                ));
            }
            // Re-reading and re-writing in the same representation must
            // reproduce the file byte for byte.
            let original = std::fs::read(&dst).unwrap();
            let (code, again, _) = run_cli(&["convert", &s(&dst), "--to", target]);
            if code != 0 || again != original {
                failures.push(format!("seed {seed}: {target} file not byte-stable"));
            }
        }
    }
    let detail = if failures.is_empty() {
        "50 seeds x 5 targets converted, checked and re-serialized byte-identically".to_string()
    } else {
        format!("{} failures, first: {}", failures.len(), failures[0])
    };
    outcome(failures.is_empty(), detail)
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let samples = samples();
    let criteria: Vec<Criterion> = vec![
        ("commuting diagram", Box::new(|| commuting_diagram(&samples))),
        ("evolution equivalence", Box::new(|| evolution_equivalence(&samples))),
        ("choi-level round trips", Box::new(|| round_trips(&samples))),
        ("canonical kraus contract", Box::new(|| canonical_kraus(&samples))),
        ("cp discrimination", Box::new(|| cp_discrimination(&samples))),
        ("vectorization identities", Box::new(vectorization_identities)),
        (
            "snake, trace and basis-change identities",
            Box::new(appendix_identities),
        ),
        (
            "fixed-basis stinespring bijectivity",
            Box::new(|| stinespring_bijectivity(&samples)),
        ),
        (
            "chi in elementary col basis equals choi",
            Box::new(|| chi_in_col_basis(&samples)),
        ),
        ("cli end to end", Box::new(cli_end_to_end)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("[{verdict}] criterion {:>2}: {name}: {}", i + 1, o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
