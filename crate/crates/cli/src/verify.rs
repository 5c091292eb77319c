//! `verify all`: one line per invariant, deterministic for a given seed.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wigner_codes::faceops::{conjugate_label, face_operator, purity_stats, FaceLabel};
use wigner_codes::mub::{verify_mub, MubSet, WeylOp};
use wigner_codes::qlinalg::{random_density_matrix_with, trace_product};
use wigner_codes::wigner::{dwf, hudson_suite, parity_check, reconstruct, DwfSpec};
use wigner_codes::Result;

const PAIRS: usize = 2000;
const DWF_STATES: usize = 20;
const HUDSON_SAMPLES: usize = 1000;

struct Report {
    text: String,
    pass: bool,
}

impl Report {
    fn line(&mut self, name: &str, ok: bool, detail: String) {
        self.pass &= ok;
        let _ = writeln!(self.text, "{name:<20} {}  {detail}", if ok { "PASS" } else { "FAIL" });
    }

    fn note(&mut self, name: &str, detail: String) {
        let _ = writeln!(self.text, "{name:<20} --    {detail}");
    }
}

fn random_label(rng: &mut ChaCha8Rng, m: &MubSet, positions: &[usize]) -> Result<FaceLabel> {
    let values: Vec<usize> = positions.iter().map(|_| rng.random_range(0..m.q())).collect();
    FaceLabel::from_positions(m.field(), positions, &values)
}

fn overlap_deviation(m: &MubSet, rng: &mut ChaCha8Rng) -> Result<(f64, usize)> {
    let q = m.q();
    let mut worst = 0.0f64;
    for i in 0..PAIRS {
        let size = 1 + i % (q + 1);
        let mut positions: Vec<usize> = (0..=q).collect();
        for j in 0..size {
            let k = rng.random_range(j..=q);
            positions.swap(j, k);
        }
        let mut positions = positions[..size].to_vec();
        positions.sort_unstable();
        let r = random_label(rng, m, &positions)?;
        let s = random_label(rng, m, &positions)?;
        let a = face_operator(m, &r)?;
        let b = face_operator(m, &s)?;
        let predicted = q as f64 - r.distance(&s)? as f64;
        worst = worst.max((trace_product(a.matrix(), b.matrix()).re - predicted).abs());
    }
    Ok((worst, PAIRS))
}

pub fn all(m: &Arc<MubSet>, tol: f64, seed: u64, purity_samples: usize) -> Result<(String, bool)> {
    let q = m.q();
    let f = m.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Report { text: String::new(), pass: true };
    let _ = writeln!(r.text, "q = {q} (p = {}, n = {}), seed = {seed}, tolerance = {tol:e}", f.p(), f.n());

    let deviation = verify_mub(m);
    r.line("mub deviation", deviation < tol, format!("max | |<a|b>| - target | = {deviation:.3e}"));

    let (worst, pairs) = overlap_deviation(m, &mut rng)?;
    r.line(
        "overlap identity",
        worst < tol,
        format!("max |Tr(A^r A^s) - (q - d(r,s))| = {worst:.3e} over {pairs} seeded pairs"),
    );

    let stats = purity_stats(
        m,
        if q.checked_pow(q as u32 + 1).is_some_and(|t| t <= 1024) { None } else { Some((purity_samples, seed)) },
    )?;
    let mode = if stats.exhaustive { "exhaustive" } else { "sampled" };
    let detail = format!(
        "average subsystem purity = {:.12} ({mode}, {} labels); Lubkin = {:.12}",
        stats.average, stats.labels, stats.lubkin
    );
    let detail = match stats.std_error {
        Some(e) => format!("{detail}; standard error {e:.2e}"),
        None => detail,
    };
    if q == 3 {
        let target = 59.0 / 81.0;
        r.line("purity", (stats.average - target).abs() < tol, format!("{detail}; 59/81 = {target:.12}"));
    } else {
        r.note("purity", detail);
    }

    if f.is_odd() {
        let d = parity_check(m)?;
        r.line("parity", d < tol, format!("max |A^0 - parity| = {d:.3e}"));

        let origin = FaceLabel::facet_from_indices(&f, &vec![0; q + 1])?;
        let a = face_operator(m, &origin)?;
        let mut worst = 0.0f64;
        for x in f.elements() {
            for z in f.elements() {
                let image = face_operator(m, &conjugate_label(&f, &origin, x, z)?)?;
                worst = worst.max(WeylOp::new(&f, x, z).conjugate(a.matrix()).max_abs_diff(image.matrix()));
            }
        }
        r.line("conjugation", worst < tol, format!("max deviation {worst:.3e} over {} displacements", q * q));
    }

    let spec = DwfSpec::origin(Arc::clone(m))?;
    let mut worst = 0.0f64;
    for _ in 0..DWF_STATES {
        let rho = random_density_matrix_with(&mut rng, q);
        let table = dwf(&spec, &rho)?;
        worst = worst.max((table.sum() - 1.0).abs());
        worst = worst.max(reconstruct(&spec, &table)?.max_abs_diff(&rho));
    }
    r.line("wigner round trip", worst < tol, format!("max deviation {worst:.3e} over {DWF_STATES} seeded states"));

    if q == 2 || (f.n() == 1 && f.is_odd()) {
        let h = hudson_suite(Arc::clone(m), HUDSON_SAMPLES, seed)?;
        r.line(
            "hudson",
            h.holds(),
            format!(
                "{}/{} MUB states non-negative; samples: {} negative, {} non-negative, {} near MUB states",
                h.mub_nonnegative, h.mub_states, h.samples_negative, h.samples_nonnegative, h.samples_near_mub
            ),
        );
    } else {
        r.note("hudson", format!("skipped: needs q = 2 or an odd prime, got {q}"));
    }

    let _ = write!(r.text, "{}", if r.pass { "all checks passed" } else { "some checks failed" });
    Ok((r.text, r.pass))
}
