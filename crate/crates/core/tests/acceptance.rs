//! Acceptance suite: one line per criterion.
//!
//! Criteria listed in `KNOWN_RED` are reported as failures but do not fail the run;
//! any other failure exits with status 1.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spindual::dense::{dense_gate, to_dense, word_matrix};
use spindual::lab::{
    decoupled_min_gap, free_spin_gap, gap_law, run_scenario, verify_term_equality,
    DualityReport, ScanFamily, ScenarioParams, ScenarioSize,
};
use spindual::lattice::{Boundary, Lattice};
use spindual::models::{build_cluster_1d_with_end, build_cluster_lattice, ClusterEnd, FieldAxis};
use spindual::rotation::{apply_clifford, apply_clifford_via_rotations, apply_rotation, conjugate_sequence};
use spindual::spectra::{full_spectrum, gap, group_levels, spectra_equal, uniform_grid, Caps, Method};
use spindual::{Angle, GateStep, Hamiltonian, Pauli, PauliWord, Term};

/// Criteria expected to fail; see the decisions notes for the analysis.
const KNOWN_RED: &[&str] = &["self-dualities"];

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:.1?}, limit {limit:?}", start.elapsed()))
}

fn letter(c: u8) -> Option<Pauli> {
    match c {
        b'x' => Some(Pauli::X),
        b'y' => Some(Pauli::Y),
        b'z' => Some(Pauli::Z),
        _ => None,
    }
}

/// Two-site word from a label such as `"oz"` (`o` = identity, site 0 first).
fn pair_word(label: &str) -> PauliWord {
    let b = label.as_bytes();
    PauliWord::new([(0, letter(b[0])), (1, letter(b[1]))].into_iter().filter_map(|(s, p)| p.map(|p| (s, p)))).unwrap()
}

const LABELS: [&str; 15] = ["ox", "oy", "oz", "xo", "yo", "zo", "xx", "xy", "xz", "yx", "yy", "yz", "zx", "zy", "zz"];

fn single(coeff: f64, w: PauliWord) -> Hamiltonian {
    Hamiltonian::new(2, [Term::new(coeff, w)]).unwrap()
}

// ---------------------------------------------------------------------------------------

// (before, after, sign); each mapping is an involution and unlisted words are invariant.
const CZ_TABLE: [(&str, &str, f64); 6] =
    [("ox", "zx", 1.0), ("oy", "zy", 1.0), ("xo", "xz", 1.0), ("yo", "yz", 1.0), ("xx", "yy", 1.0), ("xy", "yx", -1.0)];
const CX_TABLE: [(&str, &str, f64); 6] =
    [("oy", "zy", 1.0), ("oz", "zz", 1.0), ("xo", "xx", 1.0), ("yo", "yx", 1.0), ("xy", "yz", 1.0), ("xz", "yy", -1.0)];

fn expected_image(table: &[(&str, &str, f64)], label: &str) -> (f64, String) {
    for &(a, b, s) in table {
        if a == label {
            return (s, b.into());
        }
        if b == label {
            return (s, a.into());
        }
    }
    (1.0, label.into())
}

fn gate_tables() -> Outcome {
    let start = Instant::now();
    let gates = [GateStep::Cz(0, 1), GateStep::cx(0, 1), GateStep::Swap(0, 1)];
    let mut checked = 0;
    for gate in &gates {
        let u = dense_gate(gate, 2).unwrap();
        for label in std::iter::once("oo").chain(LABELS) {
            let (sign, image) = match gate {
                GateStep::Cz(..) => expected_image(&CZ_TABLE, label),
                GateStep::Cx { .. } => expected_image(&CX_TABLE, label),
                _ => (1.0, label.chars().rev().collect()),
            };
            let h = single(1.0, pair_word(label));
            let symbolic = apply_clifford(&h, gate).unwrap();
            let expected = single(sign, pair_word(&image));
            ensure(verify_term_equality(&symbolic, &expected).0, || format!("{gate} on {label}: got {symbolic}"))?;
            ensure(verify_term_equality(&apply_clifford_via_rotations(&h, gate).unwrap(), &expected).0, || {
                format!("{gate} on {label}: rotation decomposition disagrees")
            })?;
            let dense = u.conjugate(&word_matrix(&pair_word(label), 2).unwrap());
            let dev = dense.max_abs_diff(&to_dense(&symbolic).unwrap());
            ensure(dev <= 1e-12, || format!("{gate} on {label}: dense deviation {dev:e}"))?;
            checked += 1;
        }
    }
    within(Duration::from_secs(1), start)?;
    Ok(format!("{checked} gate/word pairs match the tables and the dense oracle"))
}

// ---------------------------------------------------------------------------------------

/// Per axis, four pairs `(A, sign, B)`: `A → cos η·A + sign·sin η·B`.
const ROTATION_TABLE: [(&str, [(&str, f64, &str); 4]); 15] = [
    ("ox", [("oy", -1.0, "oz"), ("xy", -1.0, "xz"), ("yy", -1.0, "yz"), ("zy", -1.0, "zz")]),
    ("oy", [("ox", 1.0, "oz"), ("xx", 1.0, "xz"), ("yx", 1.0, "yz"), ("zx", 1.0, "zz")]),
    ("oz", [("ox", -1.0, "oy"), ("xx", -1.0, "xy"), ("yx", -1.0, "yy"), ("zx", -1.0, "zy")]),
    ("xo", [("yo", -1.0, "zo"), ("yx", -1.0, "zx"), ("yy", -1.0, "zy"), ("yz", -1.0, "zz")]),
    ("yo", [("xo", 1.0, "zo"), ("xx", 1.0, "zx"), ("xy", 1.0, "zy"), ("xz", 1.0, "zz")]),
    ("zo", [("xo", -1.0, "yo"), ("xx", -1.0, "yx"), ("xy", -1.0, "yy"), ("xz", -1.0, "yz")]),
    ("xx", [("oy", -1.0, "xz"), ("oz", 1.0, "xy"), ("yo", -1.0, "zx"), ("zo", 1.0, "yx")]),
    ("xy", [("ox", 1.0, "xz"), ("oz", -1.0, "xx"), ("yo", -1.0, "zy"), ("zo", 1.0, "yy")]),
    ("xz", [("ox", -1.0, "xy"), ("oy", 1.0, "xx"), ("yo", -1.0, "zz"), ("zo", 1.0, "yz")]),
    ("yx", [("oy", -1.0, "yz"), ("oz", 1.0, "yy"), ("xo", 1.0, "zx"), ("zo", -1.0, "xx")]),
    ("yy", [("ox", 1.0, "yz"), ("oz", -1.0, "yx"), ("xo", 1.0, "zy"), ("zo", -1.0, "xy")]),
    ("yz", [("ox", -1.0, "yy"), ("oy", 1.0, "yx"), ("xo", 1.0, "zz"), ("zo", -1.0, "xz")]),
    ("zx", [("oy", -1.0, "zz"), ("oz", 1.0, "zy"), ("xo", -1.0, "yx"), ("yo", 1.0, "xx")]),
    ("zy", [("ox", 1.0, "zz"), ("oz", -1.0, "zx"), ("xo", -1.0, "yy"), ("yo", 1.0, "xy")]),
    ("zz", [("ox", -1.0, "zy"), ("oy", 1.0, "zx"), ("xo", -1.0, "yz"), ("yo", 1.0, "xz")]),
];

fn rotation_table() -> Outcome {
    let start = Instant::now();
    let angles = [Angle::QuarterTurns(1), Angle::Radians(0.3), Angle::Radians(-1.1)];
    let mut checked = 0;
    for (axis_label, pairs) in ROTATION_TABLE {
        let axis = pair_word(axis_label);
        for angle in angles {
            let (c, s) = (angle.radians().cos(), angle.radians().sin());
            let u = dense_gate(&GateStep::rotation(axis.clone(), angle), 2).unwrap();
            let mut mixed = 0;
            for label in LABELS {
                let word = pair_word(label);
                let mut expected = vec![Term::new(1.0, word.clone())];
                for &(a, sign, b) in &pairs {
                    if label == a {
                        expected = vec![Term::new(c, word.clone()), Term::new(sign * s, pair_word(b))];
                    } else if label == b {
                        expected = vec![Term::new(c, word.clone()), Term::new(-sign * s, pair_word(a))];
                    }
                }
                let expected = Hamiltonian::new(2, expected).unwrap();
                let symbolic = apply_rotation(&single(1.0, word.clone()), &axis, angle).unwrap();
                if symbolic.len() > 1 || symbolic.terms()[0].word != word {
                    mixed += 1;
                }
                let (equal, diff) = verify_term_equality(&symbolic, &expected);
                ensure(equal, || format!("axis {axis_label}, word {label}, η = {angle}: {diff:?}"))?;
                let dense = u.conjugate(&word_matrix(&word, 2).unwrap());
                let dev = dense.max_abs_diff(&to_dense(&symbolic).unwrap());
                ensure(dev <= 1e-12, || format!("axis {axis_label}, word {label}, η = {angle}: dense deviation {dev:e}"))?;
                checked += 1;
            }
            ensure(mixed == 8, || format!("axis {axis_label}, η = {angle}: {mixed} words change, expected 8"))?;
        }
    }
    within(Duration::from_secs(5), start)?;
    Ok(format!("{checked} axis/word/angle cases, four mixing pairs per axis"))
}

// ---------------------------------------------------------------------------------------

fn chain(n: usize) -> ScenarioParams {
    ScenarioParams::sized(ScenarioSize::Chain(n)).with_couplings(0.7, 1.3)
}

fn grid(r: usize, c: usize) -> ScenarioParams {
    ScenarioParams::sized(ScenarioSize::Grid(r, c)).with_couplings(0.7, 1.3)
}

fn require(report: &DualityReport, checks: &[&str]) -> Result<(), String> {
    for name in checks {
        let c = report.check(name).ok_or_else(|| format!("{} {}: check {name} missing", report.scenario, report.size))?;
        ensure(c.passed, || format!("{} {}: {name} failed: {}", report.scenario, report.size, c.detail))?;
    }
    Ok(())
}

fn ising_duality() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 2..=10 {
        let r = run_scenario("ising_self_dual", &chain(n)).map_err(|e| e.to_string())?;
        if [4, 6, 8].contains(&n) {
            require(&r, &["term_equality"])?;
        }
        require(&r, &["spectral_equality"])?;
        worst = worst.max(r.check("spectral_equality").unwrap().max_deviation.unwrap());
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("term sets equal at N = 4, 6, 8; spectra equal for N = 2..10 (max deviation {worst:.1e})"))
}

fn ising_to_cluster() -> Outcome {
    for n in [4, 6, 8] {
        for seed in 0..3 {
            let r = run_scenario("ising_to_cluster", &chain(n).with_seed(seed)).map_err(|e| e.to_string())?;
            require(&r, &["term_equality", "cz_order_invariance"])?;
        }
    }
    Ok("term sets equal at N = 4, 6, 8; reversed and 12 shuffled CZ orders agree per size".into())
}

fn staggered() -> Outcome {
    for n in [4, 6, 8] {
        let r = run_scenario("staggered_decouple", &chain(n)).map_err(|e| e.to_string())?;
        require(&r, &["term_equality", "free_site", "components"])?;
    }
    let mut levels = 0;
    for n in [4, 6] {
        for seed in 1..=5 {
            let r = run_scenario("staggered_decouple", &chain(n).with_seed(seed)).map_err(|e| e.to_string())?;
            require(&r, &["free_site", "spectral_equality"])?;
            let eig = full_spectrum(&r.start).map_err(|e| e.to_string())?.eigenvalues;
            let groups = group_levels(&eig, 1e-8);
            let odd: Vec<_> = groups.iter().filter(|(_, m)| m % 2 == 1).collect();
            ensure(odd.is_empty(), || format!("N = {n}, seed {seed}: odd multiplicities {odd:?}"))?;
            levels += groups.len();
        }
    }
    Ok(format!("term sets equal at N = 4, 6, 8; free site 0; {levels} levels over 10 disordered chains, all even"))
}

fn xz_two_ising() -> Outcome {
    for n in [4, 6, 8] {
        for seed in 0..3 {
            let r = run_scenario("xz_to_two_ising", &chain(n).with_seed(seed)).map_err(|e| e.to_string())?;
            require(&r, &["even_odd_components", "ising_components", "spectral_equality"])?;
        }
    }
    Ok("even/odd components and equal spectra at N = 4, 6, 8 for 3 coupling seeds each".into())
}

fn cluster_gaps() -> Outcome {
    let mut lines = Vec::new();
    for (g, j) in [(1.0, 1.0), (3.0, 4.0)] {
        let expected = free_spin_gap(g, j);
        let mut gaps = Vec::new();
        for n in [4, 6, 8] {
            let h = build_cluster_1d_with_end(n, j, g, FieldAxis::Z, ClusterEnd::Zx).map_err(|e| e.to_string())?;
            let r = run_scenario("cluster1d_decouple", &chain(n).with_couplings(g, j)).map_err(|e| e.to_string())?;
            require(&r, &["term_equality", "all_singletons", "gap"])?;
            gaps.push(gap(&h, None).map_err(|e| e.to_string())?.gap.unwrap_or(f64::NAN));
        }
        let spread = gaps.iter().copied().fold(f64::MIN, f64::max) - gaps.iter().copied().fold(f64::MAX, f64::min);
        let dev = gaps.iter().map(|x| (x - expected).abs()).fold(0.0, f64::max);
        ensure(dev <= 1e-9 && spread < 1e-9, || format!("chain (g, J) = ({g}, {j}): gaps {gaps:?}, expected {expected}"))?;
        lines.push(format!("chain ({g},{j}) gap {expected} ± {dev:.0e}"));
    }
    let mut gaps = Vec::new();
    for (r, c) in [(2, 2), (2, 3), (3, 3)] {
        let lat = Lattice::grid(r, c, Boundary::Open).map_err(|e| e.to_string())?;
        let h = build_cluster_lattice(&lat, 1.0, 1.0, FieldAxis::Z).map_err(|e| e.to_string())?;
        let rep = run_scenario("cluster2d_decouple", &grid(r, c).with_couplings(1.0, 1.0)).map_err(|e| e.to_string())?;
        require(&rep, &["term_equality", "all_singletons", "gap"])?;
        gaps.push(gap(&h, None).map_err(|e| e.to_string())?.gap.unwrap_or(f64::NAN));
    }
    let expected = free_spin_gap(1.0, 1.0);
    let dev = gaps.iter().map(|x| (x - expected).abs()).fold(0.0, f64::max);
    ensure(dev <= 1e-9, || format!("grids: gaps {gaps:?}, expected {expected}"))?;
    lines.push(format!("grids 2x2/2x3/3x3 gap {expected:.12} ± {dev:.0e}"));
    Ok(lines.join("; "))
}

fn self_dualities() -> Outcome {
    let mut failures = Vec::new();
    for n in [4, 6, 8] {
        let r = run_scenario("cluster1d_self_dual", &chain(n)).map_err(|e| e.to_string())?;
        if !r.check("term_equality").is_some_and(|c| c.passed) {
            let diff = r.term_diff.as_ref().unwrap();
            let show = |t: &[spindual::json::TermJson]| {
                t.iter().map(|t| format!("{:+}·{:?}", t.coeff, t.word)).collect::<Vec<_>>().join(" ")
            };
            failures.push(format!(
                "chain N = {n}: image has [{}], family has [{}]",
                show(&diff.only_left),
                show(&diff.only_right)
            ));
        }
    }
    for (r, c) in [(2, 2), (2, 3), (3, 3)] {
        let rep = run_scenario("cluster2d_self_dual", &grid(r, c)).map_err(|e| e.to_string())?;
        if let Err(e) = require(&rep, &["term_equality"]) {
            failures.push(e);
        }
    }
    let mut variant = true;
    for n in [4, 6, 8] {
        let r = run_scenario("cluster1d_self_dual_zx_end", &chain(n)).map_err(|e| e.to_string())?;
        variant &= r.passed;
    }
    let note = format!("grids 2x2/2x3/3x3 self-dual; chain with a ZX end term self-dual: {variant}");
    if failures.is_empty() { Ok(note) } else { Err(format!("{}; {note}", failures.join("; "))) }
}

fn gap_scaling() -> Outcome {
    let start = Instant::now();
    let grid = uniform_grid(20);
    let caps = Caps::default();
    let decoupled = gap_law(ScanFamily::Decoupled, &[6, 8, 10], &grid, Method::Auto, caps).map_err(|e| e.to_string())?;
    let root2 = decoupled_min_gap(1.0, 1.0);
    let dev = decoupled.min_gaps.iter().map(|g| (g - root2).abs()).fold(0.0, f64::max);
    ensure(dev <= 1e-9 && decoupled.spread < 1e-9, || format!("decoupled family min gaps {:?}", decoupled.min_gaps))?;
    let self_dual = gap_law(ScanFamily::XField(ClusterEnd::Zx), &[6, 8, 10, 12], &grid, Method::Iterative, caps)
        .map_err(|e| e.to_string())?;
    let printed = gap_law(ScanFamily::XField(ClusterEnd::Zz), &[6, 8, 10, 12], &grid, Method::Iterative, caps)
        .map_err(|e| e.to_string())?;
    let fmt = |v: &[f64]| v.iter().map(|g| format!("{g:.4e}")).collect::<Vec<_>>().join(", ");
    let detail = format!(
        "decoupled N = 6, 8, 10: √2 ± {dev:.0e}; self-dual x-field N = 6..12: [{}] at s = {:?}; ZZ-end x-field: [{}] at s = {:?}",
        fmt(&self_dual.min_gaps),
        self_dual.argmin_s,
        fmt(&printed.min_gaps),
        printed.argmin_s
    );
    ensure(self_dual.strictly_decreasing, || format!("not strictly decreasing: {detail}"))?;
    within(Duration::from_secs(600), start)?;
    Ok(detail)
}

fn constructions() -> Outcome {
    let runs: [(&str, &[&str], &[&str]); 3] = [
        ("hex_from_chains", &["2x4", "3x4"], &["target_reproduced", "hexagonal_adjacency", "spectral_equality"]),
        ("plaquette_from_xz", &["2x3", "4x3", "2x5"], &["target_reproduced", "plaquettes", "spectral_equality"]),
        ("netting_to_plaquettes", &["2,2", "3,2"], &["target_reproduced", "plaquettes", "local_fields", "spectral_equality"]),
    ];
    let mut done = Vec::new();
    for (name, sizes, checks) in runs {
        for size in sizes {
            let params = ScenarioParams::sized(size.parse().unwrap()).with_couplings(0.7, 1.3);
            let r = run_scenario(name, &params).map_err(|e| e.to_string())?;
            ensure(r.n_sites <= 12, || format!("{name} {size}: {} sites", r.n_sites))?;
            require(&r, checks)?;
            done.push(format!("{name} {size}"));
        }
    }
    Ok(done.join(", "))
}

fn universal() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let mut clifford_scripts = 0;
    let mut worst = 0.0f64;
    for case in 0..200 {
        let n = rng.gen_range(2..=6);
        let h = common::random_hamiltonian(&mut rng, n);
        let clifford = case % 2 == 0;
        let len = rng.gen_range(1..=8);
        let script = common::random_script(&mut rng, n, len, clifford);
        let out = conjugate_sequence(&h, &script).map_err(|e| e.to_string())?;
        let cmp = spectra_equal(&h, &out, 1e-9).map_err(|e| e.to_string())?;
        worst = worst.max(cmp.max_deviation);
        ensure(cmp.equal, || format!("case {case}: spectrum deviation {:e}", cmp.max_deviation))?;
        let defect = to_dense(&out).map_err(|e| e.to_string())?.hermiticity_defect();
        ensure(defect <= 1e-12, || format!("case {case}: hermiticity defect {defect:e}"))?;
        if script.is_clifford() {
            clifford_scripts += 1;
            ensure(out.len() == h.len(), || format!("case {case}: {} terms became {}", h.len(), out.len()))?;
        }
        let back = conjugate_sequence(&out, &script.inverse()).map_err(|e| e.to_string())?;
        let (equal, diff) = verify_term_equality(&back, &h);
        ensure(equal, || format!("case {case}: inverse script leaves {diff:?}"))?;
    }
    ensure(clifford_scripts >= 100, || format!("only {clifford_scripts} Clifford scripts"))?;
    Ok(format!("200 cases ({clifford_scripts} Clifford), max spectral deviation {worst:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("gate-table exactness", gate_tables),
        ("single-axis rotation table", rotation_table),
        ("ising duality", ising_duality),
        ("ising to cluster", ising_to_cluster),
        ("staggered decoupling", staggered),
        ("xz to two ising chains", xz_two_ising),
        ("cluster decoupling gaps", cluster_gaps),
        ("self-dualities", self_dualities),
        ("gap-scaling contrast", gap_scaling),
        ("constructions", constructions),
        ("universal properties", universal),
    ];
    let mut unexpected = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN_RED.contains(&name);
        match outcome {
            Ok(detail) => println!("PASS  {name} [{secs:.2}s]: {detail}"),
            Err(detail) => {
                println!("FAIL  {name} [{secs:.2}s]{}: {detail}", if known { " (known)" } else { "" });
                if !known {
                    unexpected += 1;
                }
            }
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
