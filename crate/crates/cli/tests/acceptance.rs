//! Exit gate: one line per criterion, each with its runtime limit.
//!
//! Runs without the libtest harness so the lines are always shown:
//! `cargo test -p suborbit-cli --test acceptance`.

use std::collections::{HashSet, VecDeque};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use serde_json::Value;

use suborbit::constructions::{build, diag, GroupSpec};
use suborbit::diagonal::DiagonalSpace;
use suborbit::function_model::{
    coordinate_group, plus_kernel_scan, scan_inner_times_top, FunctionSpace, ImplicitElement,
};
use suborbit::orbital::{suborbits, OrbitalGraph};
use suborbit::perm::{Automorphism, ElementTable};
use suborbit::verifiers::cf::{check_cf_ingredients, check_cf_miniature, default_miniature};
use suborbit::verifiers::ex42::{check_example42, Example42};
use suborbit::verifiers::prop31::check_prop31;
use suborbit::verifiers::sd::check_sd_dichotomy;
use suborbit::verifiers::{Mode, VerificationReport};
use suborbit::{Budget, PermGroup, Permutation};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, Box<dyn Fn() -> Outcome>);

fn actual(report: &VerificationReport, name: &str) -> Option<String> {
    report
        .claims
        .iter()
        .find(|c| c.name == name)
        .map(|c| c.actual.clone())
}

fn expect(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn passed(report: &VerificationReport) -> Result<(), String> {
    expect(report.pass, format!("report failed:\n{}", report.to_text()))
}

fn prop31_suite() -> Outcome {
    let mut kernels = 0;
    for spec in ["AGL1(5)", "AGL1(7)", "AGL1(11)", "HS(Alt(5))"] {
        let c = build(&spec.parse().unwrap(), 0, Budget::DEFAULT).map_err(|e| e.to_string())?;
        let n = c
            .regular_normal
            .clone()
            .ok_or("no regular normal subgroup")?;
        let r = check_prop31(spec, &c.group, &n, 0, Budget::DEFAULT).map_err(|e| e.to_string())?;
        passed(&r)?;
        for claim in &r.claims {
            if claim.name.ends_with("|G_α^{+[1]}|") {
                expect(claim.actual == "1", format!("{spec}: {}", claim.name))?;
                kernels += 1;
            }
            if claim.name.contains("⟨n_δ") {
                expect(
                    claim.actual == claim.expected,
                    format!("{spec}: {}", claim.name),
                )?;
            }
            if claim.name.ends_with("Γ connected") {
                expect(claim.actual == "true", format!("{spec}: {}", claim.name))?;
            }
        }
    }
    Ok(format!(
        "{kernels} orbital graphs, all connected with trivial kernel"
    ))
}

fn sd_suite() -> Outcome {
    let sd = diag(&GroupSpec::Alt(5), 3, 0, Budget::DEFAULT).map_err(|e| e.to_string())?;
    expect(sd.space().size() == 3600, "degree is not 3600")?;
    let r = check_sd_dichotomy("Diag(Alt(5),3)", &sd, None, Budget::DEFAULT)
        .map_err(|e| e.to_string())?;
    passed(&r)?;
    let nontrivial = suborbits(sd.group(), 0).map_err(|e| e.to_string())?.len() - 1;
    expect(
        r.params["betas_checked"] == nontrivial,
        "not every suborbit was checked",
    )?;
    let branches = r.params["branches"].as_object().ok_or("no branches")?;
    let second = branches.values().filter(|v| v.as_u64() == Some(2)).count();
    let first = branches.values().filter(|v| v.as_u64() == Some(1)).count();
    expect(
        first + second == nontrivial,
        "a suborbit fell outside both branches",
    )?;
    Ok(format!(
        "{nontrivial} suborbits: {first} in branch 1, {second} in branch 2"
    ))
}

fn ex42_run(k: u32, r: u64) -> Result<VerificationReport, String> {
    let ex = Example42 {
        p: 2,
        k,
        r,
        t_name: "Sym(3)".into(),
        t: PermGroup::symmetric(3),
        p_generator: Permutation::parse_cycles(3, "(0 1)").unwrap(),
        mode: Mode::Oracle,
        threads: 1,
    };
    check_example42(&ex, Budget::DEFAULT).map_err(|e| e.to_string())
}

fn ex42_suite() -> Outcome {
    let small = ex42_run(2, 3)?;
    passed(&small)?;
    expect(
        actual(&small, "|G_αβ| = |P × V|").as_deref() == Some("8"),
        "|G_αβ| ≠ 8",
    )?;
    expect(
        actual(&small, "|G_α^{+[1]}| = |V|").as_deref() == Some("4"),
        "kernel ≠ 4",
    )?;
    expect(
        actual(&small, "|G_αβ : G_α^{+[1]}| = |P|").as_deref() == Some("2"),
        "index ≠ 2",
    )?;
    let larger = ex42_run(3, 7)?;
    passed(&larger)?;
    expect(
        actual(&larger, "|G_αβ| = |P × V|").as_deref() == Some("16"),
        "|G_αβ| ≠ 16",
    )?;
    expect(
        actual(&larger, "|G_α^{+[1]}| = |V|").as_deref() == Some("8"),
        "kernel ≠ 8",
    )?;
    Ok("(2,2,3): |G_αβ| = 8, kernel 4, index 2; (2,3,7): 16, 8".into())
}

fn cf_suite(mode: Mode) -> Outcome {
    let r = check_cf_miniature(&default_miniature(mode, 1), Budget::DEFAULT)
        .map_err(|e| e.to_string())?;
    passed(&r)?;
    expect(
        actual(&r, "|G_αβ| = |V|").as_deref() == Some("216"),
        "|G_αβ| ≠ 216",
    )?;
    expect(
        actual(&r, "|G_α^{+[1]}|").as_deref() == Some("216"),
        "kernel ≠ 216",
    )?;
    expect(
        actual(&r, "G_αβ ⊴ G_α").as_deref() == Some("true"),
        "not normal",
    )?;
    expect(
        actual(&r, "G_αβ = G_α^{+[1]}").as_deref() == Some("true"),
        "G_αβ ≠ kernel",
    )?;
    expect(
        actual(&r, "local action regular: |G_α : G_α^{+[1]}| = |β^{G_α}|").is_some(),
        "no regularity claim",
    )?;
    if mode == Mode::Oracle {
        expect(r.params.contains_key("scanned"), "oracle did not scan")?;
    }
    Ok(format!(
        "{mode}: G_αβ = G_α^{{+[1]}} = V of order 216, normal, regular local action"
    ))
}

fn ingredients_suite() -> Outcome {
    let r = check_cf_ingredients(61, false, 0, Budget::DEFAULT).map_err(|e| e.to_string())?;
    passed(&r)?;
    expect(r.claims.len() == 5, "expected five claims")?;
    expect(r.params["degree"] == 1891, "degree ≠ 1891")?;
    let witnesses = r.params["trivial_pair_witnesses"]
        .as_array()
        .map_or(0, |a| a.len());
    Ok(format!(
        "PSL₂(61) of order 113460, degree 1891, {witnesses} pair witnesses"
    ))
}

fn closure(gens: &[Permutation], degree: usize) -> HashSet<Permutation> {
    let id = Permutation::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = &x * g;
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

const CORPUS: &[&str] = &[
    "Sym(5)",
    "Alt(6)",
    "Cyc(12)",
    "Dih(10)",
    "AGL1(5)",
    "AGL1(7)",
    "AGL1(11)",
    "PSL2(7)",
    "PSL2(11)",
    "HS(Alt(5))",
    "Cosets(Sym(6),Stab(0,1))",
    "Cosets(PSL2(11),Alt5)",
    "Diag(Alt(5),2)",
];

fn engine_properties() -> Result<String, String> {
    let mut membership_checked = 0;
    let mut graphs = 0;
    for spec in CORPUS {
        let g = build(&spec.parse().unwrap(), 0, Budget::DEFAULT)
            .map_err(|e| format!("{spec}: {e}"))?
            .group;
        let n = g.degree();
        for point in 0..n {
            let stab = g.stabilizer(point).map_err(|e| e.to_string())?;
            expect(
                g.order() == stab.order() * g.orbit(point).len(),
                format!("{spec}: orbit-stabilizer at {point}"),
            )?;
        }
        for s in suborbits(&g, 0)
            .map_err(|e| e.to_string())?
            .iter()
            .filter(|s| !s.trivial)
        {
            let graph = OrbitalGraph::new(&g, 0, s.representative).map_err(|e| e.to_string())?;
            expect(
                (0..n).all(|v| graph.out_degree(v) == graph.in_degree(v)),
                format!("{spec}: |Γ⁺| ≠ |Γ⁻|"),
            )?;
            let kernel = graph.plus_kernel().map_err(|e| e.to_string())?;
            expect(
                graph
                    .alpha_stabilizer()
                    .is_normal(&kernel)
                    .map_err(|e| e.to_string())?,
                format!("{spec}: kernel not normal in G_α"),
            )?;
            graphs += 1;
        }
        if g.order_u64().is_some_and(|o| o <= 10_000) {
            let all = closure(g.generators(), n);
            expect(
                all.len() as u64 == g.order_u64().unwrap(),
                format!("{spec}: order"),
            )?;
            let shifts = [
                Permutation::parse_cycles(n, "(0 1)").unwrap(),
                Permutation::parse_cycles(n, "(0 1 2)").unwrap(),
                Permutation::parse_cycles(n, "(1 2)(3 4)").unwrap(),
            ];
            for x in &all {
                expect(g.contains(x).unwrap(), format!("{spec}: member rejected"))?;
                for s in &shifts {
                    let y = x * s;
                    expect(
                        g.contains(&y).unwrap() == all.contains(&y),
                        format!("{spec}: membership of {y}"),
                    )?;
                }
            }
            membership_checked += 1;
        }
    }
    let agreed = scan_versus_explicit()?;
    Ok(format!(
        "{} groups, {graphs} orbital graphs, membership on {membership_checked}, {agreed} points scan = explicit",
        CORPUS.len()
    ))
}

/// `T = Sym(3)` on the cosets of the diagonal in `T^4`, top group `C4 ⋊ C2`.
fn scan_versus_explicit() -> Result<usize, String> {
    let err = |e: suborbit::Error| e.to_string();
    let t = ElementTable::new(&PermGroup::symmetric(3)).map_err(err)?;
    let c4 =
        PermGroup::new(vec![Permutation::parse_cycles(4, "(0 1 2 3)").unwrap()]).map_err(err)?;
    let coords = ElementTable::new(&c4).map_err(err)?;
    let inversion =
        Automorphism::from_images(&coords, (0..4).map(|v| coords.inv(v)).collect()).map_err(err)?;
    let space = FunctionSpace::new(t.clone(), coords);
    let l_group = coordinate_group(&space, &[inversion]).map_err(err)?;
    expect(
        l_group.order_u64() == Some(8),
        "L is not dihedral of order 8",
    )?;
    let l_elements = l_group.elements(Budget::DEFAULT).map_err(err)?;

    let ds = DiagonalSpace::new(t, 3).map_err(err)?;
    expect(ds.size() == 216, "|Ω| ≠ 216")?;
    let mut gens = ds.build_socle().map_err(err)?.generators().to_vec();
    for s in l_group.generators() {
        gens.push(ds.perm_of_top(s).map_err(err)?);
    }
    let g = PermGroup::new(gens).map_err(err)?;
    let alpha_stab = g.stabilizer(0).map_err(err)?;
    expect(alpha_stab.order_u64() == Some(48), "|G_α| ≠ |ι(T) × L|")?;

    let mut alpha_gens: Vec<ImplicitElement> = (0..6).map(|x| space.inner(x)).collect();
    alpha_gens.extend(l_group.generators().iter().map(|s| space.top(s.clone())));
    let reps: HashSet<usize> = suborbits(&g, 0)
        .map_err(err)?
        .iter()
        .map(|s| s.representative)
        .collect();
    for beta in 1..ds.size() {
        let tuple = ds.decode(beta);
        let point = space.point(&tuple).map_err(err)?;
        let scan =
            scan_inner_times_top(&space, &point, &l_elements, 1, Budget::DEFAULT).map_err(err)?;
        let explicit = g.pointwise_stabilizer(&[0, beta]).map_err(err)?;
        expect(
            explicit.order_u64() == Some(scan.order() as u64),
            format!(
                "β = {beta}: |G_αβ| scan {} vs explicit {}",
                scan.order(),
                explicit.order()
            ),
        )?;
        if reps.contains(&beta) {
            let implicit =
                plus_kernel_scan(&space, &point, &alpha_gens, &scan.elements, Budget::DEFAULT)
                    .map_err(err)?;
            let graph =
                OrbitalGraph::with_stabilizer(&g, 0, beta, alpha_stab.clone()).map_err(err)?;
            let kernel = graph.plus_kernel().map_err(err)?;
            expect(
                kernel.order_u64() == Some(implicit.kernel.len() as u64),
                format!(
                    "β = {beta}: kernel scan {} vs explicit {}",
                    implicit.kernel.len(),
                    kernel.order()
                ),
            )?;
            expect(
                implicit.orbit_len == graph.valency(),
                format!("β = {beta}: valency"),
            )?;
        }
    }
    Ok(ds.size() - 1)
}

fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

fn determinism() -> Outcome {
    let run = || -> Result<Value, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_suborbit"))
            .args(["verify", "all", "--json", "--seed", "0"])
            .output()
            .map_err(|e| e.to_string())?;
        expect(
            out.status.code() == Some(0),
            format!("exit status {:?}", out.status),
        )?;
        let mut v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        strip_timings(&mut v);
        Ok(v)
    };
    let (a, b) = (run()?, run()?);
    expect(a == b, "reports differ between runs")?;
    let count = a.as_array().map_or(0, |x| x.len());
    Ok(format!("{count} reports identical across two runs"))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        (
            "1 trivial kernels with a regular normal subgroup",
            Duration::from_secs(30),
            Box::new(prop31_suite),
        ),
        (
            "2 diagonal kernel dichotomy on 3600 points",
            Duration::from_secs(300),
            Box::new(sd_suite),
        ),
        (
            "3 affine example miniatures",
            Duration::from_secs(10),
            Box::new(ex42_suite),
        ),
        (
            "4a twisted miniature, fast",
            Duration::from_secs(30),
            Box::new(|| cf_suite(Mode::Fast)),
        ),
        (
            "4b twisted miniature, full scan",
            Duration::from_secs(600),
            Box::new(|| cf_suite(Mode::Oracle)),
        ),
        (
            "5 ingredients at p = 61",
            Duration::from_secs(300),
            Box::new(ingredients_suite),
        ),
        (
            "6 engine property suite",
            Duration::from_secs(120),
            Box::new(engine_properties),
        ),
        (
            "7 determinism of verify all",
            Duration::from_secs(600),
            Box::new(determinism),
        ),
    ];
    let mut failures = Vec::new();
    for (name, limit, run) in criteria {
        let started = Instant::now();
        let outcome = run();
        let elapsed = started.elapsed();
        let line = match outcome {
            Ok(detail) if elapsed <= limit => {
                format!("PASS {name}: {detail} ({} ms)", elapsed.as_millis())
            }
            Ok(detail) => format!(
                "FAIL {name}: {detail}, but took {} ms (limit {} s)",
                elapsed.as_millis(),
                limit.as_secs()
            ),
            Err(why) => format!("FAIL {name}: {why}"),
        };
        println!("{line}");
        if line.starts_with("FAIL") {
            failures.push(line);
        }
    }
    if failures.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", failures.len());
        ExitCode::FAILURE
    }
}
