//! The reproduction suite behind `dillscope verify`.
//!
//! Each experiment reproduces one worked example or checks one theorem
//! numerically, and reports PASS or FAIL with a short deterministic detail
//! line. Claims that do not survive computation are checked as stated and
//! reported as FAIL, with the computed value in the detail. Random inputs come
//! from a ChaCha stream seeded per experiment.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use dillscope_core::analysis::{
    self, classify_besicovitch, classify_feldman, non_well_defined_witness, occurrence_matrix, predicates,
    shift_compose_invariance, BesicovitchStatus, Regime,
};
use dillscope_core::dillmap::{
    apply_as_spec, check_cocycle_identity, iterate, orbit_prefixes, parse_rule, DEFAULT_MAX_INPUT,
};
use dillscope_core::editdist::{
    apply_edit, deletion_closure, hamming, levenshtein, oracle_from_closures, EditOp,
};
use dillscope_core::metrics::{
    besicovitch_exact_periodic, curve, feldman_periodic_bounds, geometric_lengths, to_csv,
};
use dillscope_core::words::shift;
use dillscope_core::{
    builtins, classify, Alphabet, Curve, CurveF64, DillMap, DistanceKind, HalfInt, InfiniteWordSpec, Letter,
    Rational, Word,
};

use crate::error::{CliError, CliResult};
use crate::output::write_atomic;
use crate::{ppm, sampling};

pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Serialize)]
pub struct Report {
    pub id: &'static str,
    pub status: &'static str,
    pub detail: String,
    pub artifacts: Vec<String>,
    #[serde(skip)]
    pub files: Vec<Artifact>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == "PASS"
    }
}

/// What an experiment found: pass flag and a one-line detail.
struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> CliResult<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

#[derive(Default)]
struct Ctx {
    files: Vec<Artifact>,
}

impl Ctx {
    fn save(&mut self, name: impl Into<String>, bytes: impl Into<Vec<u8>>) {
        self.files.push(Artifact {
            name: name.into(),
            bytes: bytes.into(),
        });
    }
}

type Run = Box<dyn Fn(&mut Ctx) -> CliResult<Outcome>>;

pub struct Experiment {
    pub id: &'static str,
    pub summary: &'static str,
    run: Run,
}

fn exp(id: &'static str, summary: &'static str, run: impl Fn(&mut Ctx) -> CliResult<Outcome> + 'static) -> Experiment {
    Experiment {
        id,
        summary,
        run: Box::new(run),
    }
}

/// The whole suite, in run order.
pub fn experiments() -> Vec<Experiment> {
    let mut out = vec![
        exp("levenshtein_examples", "Levenshtein distances of the worked examples", levenshtein_examples),
        exp("hamming_example", "Hamming distance of 010101 and 101010 as stated (5)", hamming_example),
        exp("levenshtein_oracle", "fast Levenshtein equals deletion search", levenshtein_oracle),
        exp("metric_properties", "symmetry, triangle, additivity, subadditivity", metric_properties),
        exp("occurrence_matrices", "occurrence matrices, growth and Fibonacci spectral radius", occurrence_matrices),
        exp("fibonacci_matrix_as_stated", "Fibonacci occurrence matrix and square as stated", fibonacci_matrix_as_stated),
    ];
    for &(name, summary) in CLASSIFY_SUMMARIES {
        out.push(exp(name, summary, move |ctx| classify_builtin(ctx, &name["classify_".len()..])));
    }
    out.extend([
        exp("classify_constant", "nonuniform constant map is well defined", classify_constant),
        exp("classify_equicontinuous", "uniform map with s*maxd = lower norm", classify_equicontinuous),
        exp("fibonacci_besicovitch", "Fibonacci breaks the Besicovitch quotient", fibonacci_besicovitch),
        exp("thue_morse_isometry", "Thue-Morse preserves Besicovitch densities", thue_morse_isometry),
        exp("lipschitz_sandwich", "image densities sit between the diameter-1 coefficients", lipschitz_sandwich),
        exp("shift_identity_feldman", "d_L(x, shift x) <= 1/l on every prefix", shift_identity_feldman),
        exp("min_instability", "Min-composed doubling empties (1^(p-1)0)^inf in p-1 steps", min_instability),
        exp("min_ca_instability", "the Min automaton empties (1^(p-1)0)^inf in p-1 steps", min_ca_instability),
        exp("xor_instability", "XOr fills (0^(2^k-1)1)^inf in 2^k-1 steps", xor_instability),
        exp("cocycle_identity", "F(shift^n x) = shift^theta F(x) on random triples", cocycle_identity),
        exp("feldman_lipschitz", "Feldman Lipschitz bound on substitution images", feldman_lipschitz),
        exp("non_well_defined_witness", "witness pairs for non-uniform substitutions", witness_experiment),
        exp("zero_keep_points", "0->0, 1->11: stable at 1^inf, unstable at 0^inf", zero_keep_points),
        exp("shift_compose", "shift-composed iterates of uniform maps", shift_compose),
        exp("xor_sierpinski", "XOr space-time diagram is Pascal's triangle mod 2", xor_sierpinski),
        exp("projection_columns", "f(ab) = a keeps every column constant", projection_columns),
    ]);
    out
}

pub fn ids() -> Vec<&'static str> {
    experiments().iter().map(|e| e.id).collect()
}

/// Runs one experiment by id, or all of them for `"all"`.
pub fn run(selector: &str) -> CliResult<Vec<Report>> {
    let all = experiments();
    let chosen: Vec<&Experiment> = if selector == "all" {
        all.iter().collect()
    } else {
        let found: Vec<&Experiment> = all.iter().filter(|e| e.id == selector).collect();
        if found.is_empty() {
            return Err(CliError::Usage(format!("unknown experiment {selector:?}; try `verify --list`")));
        }
        found
    };
    Ok(chosen.into_iter().map(run_one).collect())
}

fn run_one(e: &Experiment) -> Report {
    let mut ctx = Ctx::default();
    let (pass, detail) = match (e.run)(&mut ctx) {
        Ok(o) => (o.pass, o.detail),
        Err(err) => (false, format!("error: {err}")),
    };
    Report {
        id: e.id,
        status: if pass { "PASS" } else { "FAIL" },
        detail,
        artifacts: ctx.files.iter().map(|a| a.name.clone()).collect(),
        files: ctx.files,
    }
}

pub fn table(reports: &[Report]) -> String {
    let width = reports.iter().map(|r| r.id.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in reports {
        writeln!(out, "{}  {:<width$}  {}", r.status, r.id, r.detail).expect("string write");
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    writeln!(out, "{} passed, {} failed", reports.len() - failed, failed).expect("string write");
    out
}

pub fn json(reports: &[Report]) -> String {
    let mut out = serde_json::to_string_pretty(reports).expect("reports serialize");
    out.push('\n');
    out
}

/// Writes every artifact plus `verify.json` into `dir`.
pub fn write_artifacts(reports: &[Report], dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for a in reports.iter().flat_map(|r| &r.files) {
        write_atomic(&dir.join(&a.name), &a.bytes)?;
    }
    write_atomic(&dir.join("verify.json"), json(reports).as_bytes())
}

// ---------------------------------------------------------------- helpers

fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn builtin(name: &str) -> Arc<DillMap> {
    builtins::get(name).expect("built-in rule")
}

fn bin(text: &str) -> Word {
    Alphabet::binary().parse_word(text).expect("binary word")
}

fn periodic(transient: Word, period: Word) -> InfiniteWordSpec {
    InfiniteWordSpec::periodic(transient, period).expect("nonempty period")
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

/// Collects named checks; the detail lists the failing ones.
#[derive(Default)]
struct Checks {
    failed: Vec<String>,
    count: usize,
}

impl Checks {
    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.count += 1;
        if !ok {
            self.failed.push(name.into());
        }
    }

    fn finish(self, summary: impl Into<String>) -> CliResult<Outcome> {
        let summary = summary.into();
        if self.failed.is_empty() {
            outcome(true, format!("{} checks; {summary}", self.count))
        } else {
            outcome(false, format!("failed: {}; {summary}", self.failed.join(", ")))
        }
    }
}

// ------------------------------------------------------------ edit distances

fn levenshtein_examples(_: &mut Ctx) -> CliResult<Outcome> {
    let (u, v) = (bin("010101"), bin("101010"));
    let mut c = Checks::default();
    let d = levenshtein(&u, &v);
    c.check("d_L(010101,101010)=1", d == HalfInt::from_int(1));
    let half = levenshtein(&bin("0000"), &bin("00001"));
    c.check("d_L(0000,00001)=1/2", half == HalfInt::from_doubled(1));
    let deleted = apply_edit(&u, EditOp::Delete { pos: 0 })?;
    c.check("D_0(010101)=10101", deleted == bin("10101"));
    c.check("d_L(u,D_0 u)=1/2", levenshtein(&u, &deleted) == HalfInt::from_doubled(1));
    c.finish(format!("d_L(010101,101010)={d}, d_L(0000,00001)={half}"))
}

fn hamming_example(_: &mut Ctx) -> CliResult<Outcome> {
    let d = hamming(&bin("010101"), &bin("101010"))?;
    outcome(d == 5, format!("stated 5, computed {d}: the words differ at every one of their 6 positions"))
}

fn levenshtein_oracle(_: &mut Ctx) -> CliResult<Outcome> {
    let binary: Vec<Word> = (0..=8).flat_map(|n| Alphabet::binary().words_of_length(n).collect::<Vec<_>>()).collect();
    let closures: Vec<Vec<Vec<Letter>>> = binary.iter().map(|w| deletion_closure(w)).collect::<Result<_, _>>()?;
    let mut mismatches = 0usize;
    let mut pairs = 0usize;
    for (u, cu) in binary.iter().zip(&closures) {
        for (v, cv) in binary.iter().zip(&closures) {
            pairs += 1;
            if levenshtein(u, v) != oracle_from_closures(u.len(), cu, v.len(), cv) {
                mismatches += 1;
            }
        }
    }
    let mut rng = sampling::rng(2);
    for _ in 0..1000 {
        let (n, m) = (rand::Rng::gen_range(&mut rng, 0..=10), rand::Rng::gen_range(&mut rng, 0..=10));
        let (u, v) = (sampling::word(&mut rng, 3, n), sampling::word(&mut rng, 3, m));
        pairs += 1;
        if levenshtein(&u, &v) != dillscope_core::editdist::levenshtein_oracle(&u, &v)? {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("{pairs} pairs, {mismatches} mismatches"))
}

fn metric_properties(_: &mut Ctx) -> CliResult<Outcome> {
    let mut rng = sampling::rng(3);
    let mut violations = 0usize;
    for _ in 0..10_000 {
        let k = rand::Rng::gen_range(&mut rng, 2..=3);
        let n = rand::Rng::gen_range(&mut rng, 0..=10);
        let m = rand::Rng::gen_range(&mut rng, 0..=10);
        let [a, b, c] = [0; 3].map(|_| sampling::word(&mut rng, k, n));
        let [a2, b2] = [0; 2].map(|_| sampling::word(&mut rng, k, m));
        let h = |u: &[Letter], v: &[Letter]| hamming(u, v).expect("equal lengths");
        let l = |u: &[Letter], v: &[Letter]| levenshtein(u, v).doubled();
        // Levenshtein also on unequal lengths: cut `b` short
        let cut = rand::Rng::gen_range(&mut rng, 0..=n);
        let b_cut = &b[..cut];
        let ok = h(&a, &b) == h(&b, &a)
            && l(&a, b_cut) == l(b_cut, &a)
            && h(&a, &c) <= h(&a, &b) + h(&b, &c)
            && l(&a, &c) <= l(&a, b_cut) + l(b_cut, &c)
            && h(&a.concat(&a2), &b.concat(&b2)) == h(&a, &b) + h(&a2, &b2)
            && l(&a.concat(&a2), &b.concat(&b2)) <= l(&a, &b) + l(&a2, &b2)
            && l(&a, &b) <= 2 * h(&a, &b) as u64;
        if !ok {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("10000 quadruples, {violations} violations"))
}

// --------------------------------------------------------------- matrices

fn fibonacci_numbers(n: usize) -> Vec<BigUint> {
    let mut f = vec![BigUint::from(2u32), BigUint::from(3u32)];
    while f.len() < n {
        let next = &f[f.len() - 1] + &f[f.len() - 2];
        f.push(next);
    }
    f.truncate(n);
    f
}

fn occurrence_matrices(_: &mut Ctx) -> CliResult<Outcome> {
    let mut c = Checks::default();
    let tm = occurrence_matrix(&builtin("thue_morse"))?;
    c.check("thue_morse M", tm.rows() == vec![vec![1, 1], vec![1, 1]]);
    let om = occurrence_matrix(&builtin("one_to_1_00"))?;
    c.check("0->1,1->00 M^2=2I", om.pow(2).rows() == vec![vec![2, 0], vec![0, 2]]);
    let fib_map = builtin("fibonacci");
    let fib = occurrence_matrix(&fib_map)?;
    c.check("fibonacci M by definition", fib.rows() == vec![vec![1, 1], vec![1, 0]]);
    let lengths: Vec<BigUint> = (1..=30).map(|t| analysis::growth(&fib_map, 0, t)).collect::<Result<_, _>>()?;
    c.check("|tau^t(0)| are Fibonacci numbers", lengths == fibonacci_numbers(30));
    for t in 1..=8u32 {
        let power = fib.pow(t);
        let image = (0..t).fold(bin("0"), |w, _| fib_map.f_star(&w));
        c.check(
            format!("row sums of M^{t}"),
            BigUint::from(power.row_sum(0)) == BigUint::from(image.len()),
        );
    }
    let rho = analysis::components(&fib_map)?.rho_max;
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    c.check("rho within 1e-6 of the golden ratio", (rho.midpoint() - golden).abs() <= 1e-6 && rho.contains(golden));
    c.finish(format!("fibonacci rho in [{:.10}, {:.10}]", rho.low, rho.high))
}

fn fibonacci_matrix_as_stated(_: &mut Ctx) -> CliResult<Outcome> {
    let m = occurrence_matrix(&builtin("fibonacci"))?;
    let (m1, m2) = (m.rows(), m.pow(2).rows());
    let pass = m1 == vec![vec![0, 1], vec![1, 1]] && m2 == vec![vec![1, 1], vec![1, 2]];
    outcome(
        pass,
        format!(
            "stated M=[[0,1],[1,1]], M^2=[[1,1],[1,2]]; computed M={m1:?}, M^2={m2:?} (the stated pair has letters 0 and 1 swapped)"
        ),
    )
}

// --------------------------------------------------------- classification

const CLASSIFY_SUMMARIES: &[(&str, &str)] = &[
    ("classify_thue_morse", "Thue-Morse: uniform, primitive, isometry"),
    ("classify_fibonacci", "Fibonacci: not well defined, Feldman Lipschitz 2"),
    ("classify_doubling", "doubling: reducible, both components maximum"),
    ("classify_cantor", "Cantor: Toeplitz, contracting"),
    ("classify_xor", "XOr: cellular automaton, Feldman Lipschitz 3"),
    ("classify_min", "Min: cellular automaton, Feldman Lipschitz 3"),
    ("classify_min_doubling", "Min-composed doubling: uniform with diameter 2"),
    ("classify_one_to_1_00", "0->1, 1->00: irreducible, Feldman equicontinuous"),
    ("classify_zero_keep", "0->0, 1->11: maxal {1}, not Feldman equicontinuous"),
];

/// Expected verdicts for one map; `None` fields are not checked.
#[derive(Default)]
struct Expect {
    status: Option<BesicovitchStatus>,
    regime: Option<Option<Regime>>,
    lipschitz: Option<Option<Rational>>,
    feldman_lipschitz: Option<Rational>,
    equicontinuous: Option<Option<bool>>,
    points: Option<Option<Vec<Letter>>>,
    uniform: Option<bool>,
    ca: Option<bool>,
    irreducible: Option<Option<bool>>,
    primitive: Option<Option<bool>>,
    toeplitz: Option<Option<bool>>,
    all_components_maximum: Option<bool>,
}

fn check_expectations(map: &DillMap, e: Expect) -> CliResult<Outcome> {
    let bes = classify_besicovitch(map);
    let fel = classify_feldman(map);
    let pred = predicates(map);
    let mut c = Checks::default();
    if let Some(v) = e.status {
        c.check(format!("status {v:?}"), bes.status == v);
    }
    if let Some(v) = e.regime {
        c.check(format!("regime {v:?}"), bes.regime == v);
    }
    if let Some(v) = e.lipschitz {
        c.check("besicovitch lipschitz", bes.lipschitz == v);
    }
    if let Some(v) = e.feldman_lipschitz {
        c.check(format!("feldman lipschitz {v}"), fel.lipschitz == v);
    }
    if let Some(v) = e.equicontinuous {
        c.check(format!("equicontinuous {v:?}"), fel.equicontinuous == v);
    }
    if let Some(v) = e.points {
        c.check("equicontinuous points", fel.equicontinuous_points == v);
    }
    if let Some(v) = e.uniform {
        c.check("uniform", pred.uniform == v);
    }
    if let Some(v) = e.ca {
        c.check("ca", pred.ca == v);
    }
    if let Some(v) = e.irreducible {
        c.check("irreducible", pred.irreducible == v);
    }
    if let Some(v) = e.primitive {
        c.check("primitive", pred.primitive == v);
    }
    if let Some(v) = e.toeplitz {
        c.check("toeplitz", pred.toeplitz == v);
    }
    if let Some(v) = e.all_components_maximum {
        let d = analysis::components(map)?;
        c.check("all components maximum", d.components.iter().all(|comp| comp.maximum) == v);
    }
    let regime = bes.regime.map_or("none".to_owned(), |r| format!("{r:?}"));
    c.finish(format!(
        "status={:?} regime={regime} feldman_lipschitz={}",
        bes.status, fel.lipschitz
    ))
}

fn classify_builtin(ctx: &mut Ctx, name: &str) -> CliResult<Outcome> {
    use BesicovitchStatus::*;
    let map = builtin(name);
    let mut report = serde_json::to_string_pretty(&classify(&map)).expect("report serializes");
    report.push('\n');
    ctx.save(format!("classify_{name}.json"), report);
    let expect = match name {
        "thue_morse" => Expect {
            status: Some(WellDefinedUniform),
            regime: Some(Some(Regime::Isometry)),
            lipschitz: Some(Some(q(1, 1))),
            uniform: Some(true),
            primitive: Some(Some(true)),
            toeplitz: Some(Some(false)),
            equicontinuous: Some(Some(true)),
            ..Expect::default()
        },
        "fibonacci" => Expect {
            status: Some(NotWellDefined),
            regime: Some(None),
            feldman_lipschitz: Some(q(2, 1)),
            uniform: Some(false),
            primitive: Some(Some(true)),
            equicontinuous: Some(Some(true)),
            points: Some(Some(vec![0, 1])),
            ..Expect::default()
        },
        "doubling" => Expect {
            status: Some(WellDefinedUniform),
            regime: Some(Some(Regime::Isometry)),
            irreducible: Some(Some(false)),
            all_components_maximum: Some(true),
            equicontinuous: Some(Some(true)),
            points: Some(Some(vec![0, 1])),
            ..Expect::default()
        },
        "cantor" => Expect {
            status: Some(WellDefinedUniform),
            regime: Some(Some(Regime::Contracting)),
            lipschitz: Some(Some(q(2, 3))),
            toeplitz: Some(Some(true)),
            irreducible: Some(Some(false)),
            ..Expect::default()
        },
        "xor" | "min" => Expect {
            status: Some(WellDefinedUniform),
            regime: Some(Some(Regime::Unclassified)),
            ca: Some(true),
            feldman_lipschitz: Some(q(3, 1)),
            equicontinuous: Some(None),
            irreducible: Some(None),
            ..Expect::default()
        },
        "min_doubling" => Expect {
            status: Some(WellDefinedUniform),
            regime: Some(Some(Regime::Unclassified)),
            ca: Some(false),
            uniform: Some(true),
            feldman_lipschitz: Some(q(3, 1)),
            equicontinuous: Some(None),
            ..Expect::default()
        },
        "one_to_1_00" => Expect {
            status: Some(NotWellDefined),
            irreducible: Some(Some(true)),
            primitive: Some(Some(false)),
            equicontinuous: Some(Some(true)),
            feldman_lipschitz: Some(q(2, 1)),
            ..Expect::default()
        },
        "zero_keep" => Expect {
            status: Some(NotWellDefined),
            irreducible: Some(Some(false)),
            equicontinuous: Some(Some(false)),
            points: Some(Some(vec![1])),
            feldman_lipschitz: Some(q(2, 1)),
            ..Expect::default()
        },
        other => unreachable!("no expectations for {other}"),
    };
    check_expectations(&map, expect)
}

fn classify_constant(_: &mut Ctx) -> CliResult<Outcome> {
    // every image is a block of zeros, so every point maps to 0^inf
    let map = parse_rule("zeros", "alphabet=01\ndiameter=1\n0 -> 0\n1 -> 00\n")?;
    check_expectations(
        &map,
        Expect {
            status: Some(BesicovitchStatus::WellDefinedConstant),
            regime: Some(Some(Regime::Contracting)),
            lipschitz: Some(Some(q(0, 1))),
            uniform: Some(false),
            ..Expect::default()
        },
    )
}

fn classify_equicontinuous(_: &mut Ctx) -> CliResult<Outcome> {
    let map = parse_rule("steps", "alphabet=012\ndiameter=1\n0 -> 00\n1 -> 01\n2 -> 11\n")?;
    check_expectations(
        &map,
        Expect {
            status: Some(BesicovitchStatus::WellDefinedUniform),
            regime: Some(Some(Regime::Equicontinuous)),
            lipschitz: Some(Some(q(1, 1))),
            ..Expect::default()
        },
    )
}

// ---------------------------------------------------------- pseudo-metrics

fn fibonacci_besicovitch(ctx: &mut Ctx) -> CliResult<Outcome> {
    let fib = builtin("fibonacci");
    let x = InfiniteWordSpec::constant(0);
    let y = periodic(bin("1"), bin("0"));
    let input = besicovitch_exact_periodic(&x, &y)?;
    let alternating = besicovitch_exact_periodic(&periodic(Word::empty(), bin("01")), &periodic(Word::empty(), bin("10")))?;
    let (fx, fy) = (apply_as_spec(&fib, &x), apply_as_spec(&fib, &y));
    let image_exact = besicovitch_exact_periodic(&fx, &fy)?;
    let image: CurveF64 = curve(DistanceKind::Hamming, &fx, &fy, &geometric_lengths(6, 20))?;
    ctx.save("fibonacci_besicovitch.csv", to_csv(&image));
    let pass = input == q(0, 1) && alternating == q(1, 1) && image.estimate.value >= 0.4;
    outcome(
        pass,
        format!(
            "input pair {input}, alternating pair {alternating}, image estimate {:.9} at l=2^20 (exact {image_exact})",
            image.estimate.value
        ),
    )
}

fn thue_morse_isometry(_: &mut Ctx) -> CliResult<Outcome> {
    let tm = builtin("thue_morse");
    let mut rng = sampling::rng(7);
    let slack = q(1, 1024);
    let mut worst = q(0, 1);
    for _ in 0..20 {
        let (x, y) = (sampling::periodic(&mut rng, 2, 6, 8), sampling::periodic(&mut rng, 2, 6, 8));
        let before = besicovitch_exact_periodic(&x, &y)?;
        let after = besicovitch_exact_periodic(&apply_as_spec(&tm, &x), &apply_as_spec(&tm, &y))?;
        let gap = if after > before { after - before } else { before - after };
        worst = worst.max(gap);
    }
    outcome(worst <= slack, format!("20 pairs, largest density change {worst}"))
}

fn lipschitz_sandwich(_: &mut Ctx) -> CliResult<Outcome> {
    let mut rng = sampling::rng(8);
    let mut c = Checks::default();
    for name in ["thue_morse", "doubling", "cantor"] {
        let map = builtin(name);
        let report = classify_besicovitch(&map);
        let (Some(maxd), Some(mind)) = (report.maxd, report.mind) else {
            return outcome(false, format!("{name}: missing image distances"));
        };
        let f = map.lower_norm() as i64;
        for i in 0..10 {
            let (x, y) = (sampling::periodic(&mut rng, 2, 5, 7), sampling::periodic(&mut rng, 2, 5, 7));
            let d = besicovitch_exact_periodic(&x, &y)?;
            let image = besicovitch_exact_periodic(&apply_as_spec(&map, &x), &apply_as_spec(&map, &y))?;
            let low = q(mind as i64, f) * &d;
            let high = q(maxd as i64, f) * &d;
            c.check(format!("{name}#{i}"), low <= image && image <= high);
        }
    }
    c.finish("diameter-1 uniform built-ins, 10 pairs each")
}

fn shift_identity_feldman(ctx: &mut Ctx) -> CliResult<Outcome> {
    let mut rng = sampling::rng(9);
    let lengths = geometric_lengths(6, 20);
    let mut worst = 0u64;
    for i in 0..10 {
        let x = sampling::periodic(&mut rng, 2, 16, 24);
        let c: CurveF64 = curve(DistanceKind::Levenshtein, &x, &shift(&x, 1), &lengths)?;
        if i == 0 {
            ctx.save("shift_identity_feldman.csv", to_csv(&c));
        }
        // normalized <= 1/l  <=>  doubled raw distance <= 2
        worst = worst.max(c.samples.iter().map(|s| s.raw_doubled).max().unwrap_or(0));
    }
    outcome(
        worst <= 2,
        format!("10 words, l=2^6..2^20, largest raw distance {}", HalfInt::from_doubled(worst)),
    )
}

// ---------------------------------------------------------------- orbits

/// `p` values in `2..=32` for which `F^{p-1}((1^{p-1}0)^inf)` starts with
/// `0^1024`.
fn emptied(map: &DillMap) -> CliResult<(Vec<usize>, Vec<usize>)> {
    let (mut ok, mut bad) = (Vec::new(), Vec::new());
    for p in 2..=32 {
        let x = periodic(Word::empty(), Word::repeat_letter(1, p - 1).concat(&[0]));
        let prefix = iterate(map, &x, p - 1, 1024)?;
        if prefix.iter().all(|&a| a == 0) {
            ok.push(p);
        } else {
            bad.push(p);
        }
    }
    Ok((ok, bad))
}

fn min_instability(_: &mut Ctx) -> CliResult<Outcome> {
    let map = builtin("min_doubling");
    let (ok, bad) = emptied(&map)?;
    let p = 3;
    let x = periodic(Word::empty(), Word::repeat_letter(1, p - 1).concat(&[0]));
    let ones = iterate(&map, &x, p - 1, 1024)?.occurrences(1);
    outcome(
        bad.is_empty(),
        format!(
            "holds for p={}; fails for p={}; e.g. p=3 leaves {ones} ones in the first 1024 letters (a run of r ones becomes 2(r-1) ones)",
            join(&ok),
            join(&bad)
        ),
    )
}

fn min_ca_instability(_: &mut Ctx) -> CliResult<Outcome> {
    let map = builtin("min");
    let (_, bad) = emptied(&map)?;
    let x = periodic(Word::empty(), bin("1110"));
    let d = besicovitch_exact_periodic(&x, &InfiniteWordSpec::constant(1))?;
    outcome(
        bad.is_empty() && d == q(1, 4),
        format!("p=2..32 all emptied; d_H((1110)^inf, 1^inf)={d}"),
    )
}

fn xor_fills(map: &DillMap, zeros: usize, steps: usize) -> CliResult<bool> {
    let y = periodic(Word::empty(), Word::repeat_letter(0, zeros).concat(&[1]));
    Ok(iterate(map, &y, steps, 1024)?.iter().all(|&a| a == 1))
}

fn xor_instability(_: &mut Ctx) -> CliResult<Outcome> {
    let xor = builtin("xor");
    let mut bad = Vec::new();
    let mut literal = Vec::new();
    for k in 1..=6usize {
        let n = (1 << k) - 1;
        if !xor_fills(&xor, n, n)? {
            bad.push(k);
        }
        if xor_fills(&xor, 2 * k - 1, 2 * k - 1)? {
            literal.push(k);
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "2^k-1 reading holds for k=1..6{}; literal 2k-1 reading holds for k={} only",
            if bad.is_empty() { String::new() } else { format!(" except k={}", join(&bad)) },
            join(&literal)
        ),
    )
}

fn cocycle_identity(_: &mut Ctx) -> CliResult<Outcome> {
    let mut rng = sampling::rng(10);
    let shipped = builtins::all();
    let mut failures = 0usize;
    for i in 0..200 {
        let map = if i % 4 == 0 {
            shipped[(i / 4) % shipped.len()].clone()
        } else {
            let k = rand::Rng::gen_range(&mut rng, 2..=3);
            let s = rand::Rng::gen_range(&mut rng, 1..=3);
            Arc::new(sampling::rule(&mut rng, "random", k, s, 3))
        };
        let k = map.alphabet().size();
        let x = sampling::periodic(&mut rng, k, 8, 8);
        let n = rand::Rng::gen_range(&mut rng, 0..=16);
        if !check_cocycle_identity(&map, &x, n, 256)? {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("200 triples at l=256, {failures} failures"))
}

/// Block counts `1, 2, 4, ...` with at most `max_letters` aligned letters.
pub fn fekete_block_counts(block: usize, max_letters: usize) -> Vec<usize> {
    let mut counts = vec![1];
    while counts.last().expect("nonempty") * 2 * block <= max_letters {
        counts.push(counts.last().expect("nonempty") * 2);
    }
    counts
}

fn feldman_lipschitz(_: &mut Ctx) -> CliResult<Outcome> {
    let mut rng = sampling::rng(11);
    let lengths = geometric_lengths(8, 15);
    let slack = q(1, 64);
    let mut c = Checks::default();
    let mut tightest: Option<Rational> = None;
    for map in builtins::all().into_iter().filter(|m| m.is_substitution()) {
        let ratio = q(map.upper_norm() as i64, map.lower_norm() as i64);
        for i in 0..20 {
            let (x, y) = (sampling::periodic(&mut rng, 2, 4, 6), sampling::periodic(&mut rng, 2, 4, 6));
            let (_, px) = x.as_periodic().expect("periodic");
            let (_, py) = y.as_periodic().expect("periodic");
            let block = num_integer::lcm(px.len(), py.len());
            let bounds = feldman_periodic_bounds(&x, &y, &fekete_block_counts(block, 4096))?;
            let image: Curve = curve(DistanceKind::Levenshtein, &apply_as_spec(&map, &x), &apply_as_spec(&map, &y), &lengths)?;
            let bound = &ratio * &bounds.upper + &slack;
            let margin = &bound - &image.estimate.value;
            tightest = Some(match tightest {
                Some(t) if t <= margin => t,
                _ => margin.clone(),
            });
            c.check(format!("{}#{i}", map.name()), image.estimate.value <= bound);
        }
    }
    let tightest = tightest.expect("six substitutions");
    c.finish(format!(
        "6 substitutions x 20 pairs, smallest margin {:.6}",
        dillscope_core::scalar::Scalar::to_f64(&tightest)
    ))
}

fn witness_experiment(_: &mut Ctx) -> CliResult<Outcome> {
    let mut c = Checks::default();
    let mut found = Vec::new();
    for name in ["fibonacci", "one_to_1_00", "zero_keep"] {
        let map = builtin(name);
        match non_well_defined_witness(&map, 6) {
            Some(w) => {
                c.check(format!("{name} input distance 0"), w.input_distance == q(0, 1));
                c.check(format!("{name} image distance > 0"), w.image_distance > q(0, 1));
                let a = map.alphabet();
                found.push(format!(
                    "{name}: u={} v={} w={} image distance {}",
                    a.render(&w.pair.u),
                    a.render(&w.pair.v),
                    a.render(&w.tail),
                    w.image_distance
                ));
            }
            None => c.check(format!("{name} witness"), false),
        }
    }
    for name in ["thue_morse", "doubling"] {
        c.check(format!("{name} has none"), non_well_defined_witness(&builtin(name), 3).is_none());
    }
    c.finish(found.join("; "))
}

fn zero_keep_points(ctx: &mut Ctx) -> CliResult<Outcome> {
    let map = builtin("zero_keep");
    let mut c = Checks::default();
    c.check("maxal {1}", analysis::components(&map)?.maxal == vec![1]);
    c.check("not equicontinuous", classify_feldman(&map).equicontinuous == Some(false));

    let lengths = geometric_lengths(10, 14);
    let near_zero = periodic(Word::empty(), bin("00000001"));
    let near_one = periodic(Word::empty(), bin("11111110"));
    let (mut a, mut b) = (near_zero.clone(), near_one.clone());
    let (zero, one) = (InfiniteWordSpec::constant(0), InfiniteWordSpec::constant(1));
    let mut far = Vec::new();
    for t in 0..=6 {
        let dz: CurveF64 = curve(DistanceKind::Levenshtein, &zero, &a, &lengths)?;
        let d1: CurveF64 = curve(DistanceKind::Levenshtein, &one, &b, &lengths)?;
        far.push(format!("{:.3}", dz.estimate.value));
        c.check(format!("t={t} stays near 1^inf"), d1.estimate.value <= 0.125);
        a = apply_as_spec(&map, &a);
        b = apply_as_spec(&map, &b);
    }
    c.check("driven away from 0^inf", far.last().expect("seven steps").parse::<f64>().unwrap_or(0.0) >= 0.5);

    let cap = DEFAULT_MAX_INPUT;
    for (file, spec) in [("zero_keep_ones.ppm", InfiniteWordSpec::constant(1)), ("zero_keep_alternating.ppm", periodic(Word::empty(), bin("10")))] {
        ctx.save(file, ppm::encode(&orbit_prefixes(&map, &spec, 24, 128, cap)?));
    }
    c.finish(format!("d_L from 0^inf for t=0..6: {}", far.join(" ")))
}

fn shift_compose(_: &mut Ctx) -> CliResult<Outcome> {
    let mut rng = sampling::rng(12);
    let mut c = Checks::default();
    for (name, m) in [("thue_morse", 1), ("cantor", 2), ("xor", 1), ("min_doubling", 1)] {
        let map = builtin(name);
        let samples: Vec<InfiniteWordSpec> = (0..5).map(|_| sampling::periodic(&mut rng, 2, 4, 6)).collect();
        c.check(format!("{name} m={m}"), shift_compose_invariance(&map, m, &samples, 4, 64)?);
    }
    c.finish("n=1..4 on 5 words each, l=64")
}

fn xor_sierpinski(ctx: &mut Ctx) -> CliResult<Outcome> {
    const W: usize = 64;
    let xor = builtin("xor");
    let seed = periodic(Word::repeat_letter(0, W - 1).concat(&[1]), bin("0"));
    let rows = orbit_prefixes(&xor, &seed, W, W, DEFAULT_MAX_INPUT)?;
    ctx.save("xor_sierpinski.ppm", ppm::encode(&rows));
    // Pascal's triangle mod 2, built by addition
    let mut pascal = [0u8; W];
    pascal[0] = 1;
    let mut mismatched = 0;
    for row in &rows {
        // cell i of row t is C(t, W-1-i) mod 2
        if (0..W).any(|i| row[i] != pascal[W - 1 - i]) {
            mismatched += 1;
        }
        for j in (1..W).rev() {
            pascal[j] ^= pascal[j - 1];
        }
    }
    outcome(mismatched == 0, format!("{W} rows of width {W}, {mismatched} rows off Pascal parity"))
}

fn projection_columns(ctx: &mut Ctx) -> CliResult<Outcome> {
    let map = parse_rule("left", "alphabet=01\ndiameter=2\n00 -> 0\n01 -> 0\n10 -> 1\n11 -> 1\n")?;
    let x = periodic(bin("0"), bin("110100111"));
    let rows = orbit_prefixes(&map, &x, 16, 48, DEFAULT_MAX_INPUT)?;
    ctx.save("projection_columns.ppm", ppm::encode(&rows));
    let constant = rows.iter().all(|r| r == &rows[0]);
    outcome(constant, "16 rows of width 48")
}
