//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use boxlogic::box_world::{BoxSpec, BoxWorld, BuiltWorld, SingleBoxLogic};
use boxlogic::logic::{
    are_isomorphic, verify_logic_axioms, zero_one_pasting, ConcreteLogic, GroundSet, Orthoposet,
    DEFAULT_BUDGET,
};
use boxlogic::products::{
    verify_atoms_product, verify_free_orthodistributive, verify_strong_tensor_product,
    verify_weak_conditions,
};
use boxlogic::states::{
    chsh_value, factorize_two_valued, ns_polytope, polytope_vertices, product_state, rational,
    two_valued_states, Behavior, Rational,
};
use boxlogic::{Bits, Error};

/// Element cap for the axiom sweep, keeping the suite at desk scale.
const AXIOM_SWEEP_BUDGET: usize = 6_000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn built(l: &[usize], r: &[usize]) -> BuiltWorld {
    BuiltWorld::build(common::world(l, r), DEFAULT_BUDGET).unwrap()
}

fn powerset(n: usize) -> ConcreteLogic {
    let g = GroundSet::plain(n);
    let singletons: Vec<Bits> = (0..n).map(|i| g.event(&[i]).unwrap()).collect();
    ConcreteLogic::generate(g, &singletons, DEFAULT_BUDGET).unwrap()
}

fn chsh_vertices(b: &BuiltWorld) -> Vec<Behavior> {
    polytope_vertices(&ns_polytope(&b.world), 24).unwrap()
}

fn construction_fidelity() -> Outcome {
    let b = built(&[2, 2], &[2, 2]);
    let composite = b.composite.logic();
    ensure!(
        composite.atoms().len() == 16,
        "{} atoms",
        composite.atoms().len()
    );
    ensure!(composite.is_atomistic(), "composite logic is not atomistic");
    let axioms = verify_logic_axioms(composite);
    ensure!(axioms.passed(), "composite fails {:?}", axioms.failed_ids());
    let single = b.left.logic();
    ensure!(
        single.len() == 6,
        "single-box logic has {} elements",
        single.len()
    );
    let pasting = zero_one_pasting(&[powerset(2), powerset(2)]).unwrap();
    let abstract_pasting = Orthoposet::abstract_pasting(&[powerset(2), powerset(2)]).unwrap();
    let single_poset = single.orthoposet().unwrap();
    ensure!(
        are_isomorphic(
            &single_poset,
            &pasting.orthoposet().unwrap(),
            DEFAULT_BUDGET
        )
        .unwrap(),
        "not isomorphic to the concrete pasting"
    );
    ensure!(
        are_isomorphic(&single_poset, &abstract_pasting, DEFAULT_BUDGET).unwrap(),
        "not isomorphic to the abstract pasting"
    );
    Ok(format!("16 atoms, atomistic, {} composite elements; single box has 6 elements, isomorphic to the 0-1 pasting", composite.len()))
}

fn sides(max_inputs: usize, sizes: &[usize]) -> Vec<Vec<usize>> {
    fn extend(
        prefix: &mut Vec<usize>,
        from: usize,
        left: usize,
        sizes: &[usize],
        out: &mut Vec<Vec<usize>>,
    ) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if left == 0 {
            return;
        }
        for i in from..sizes.len() {
            prefix.push(sizes[i]);
            extend(prefix, i, left - 1, sizes, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 0, max_inputs, sizes, &mut out);
    out
}

fn axiom_suite() -> Outcome {
    let sides = sides(3, &[1, 2, 3]);
    ensure!(sides.len() == 19, "{} box specs", sides.len());
    let mut checked = 0;
    let mut over_budget = 0;
    for s in &sides {
        let l = SingleBoxLogic::build(&BoxSpec::new(s.clone()).unwrap(), DEFAULT_BUDGET).unwrap();
        let r = verify_logic_axioms(l.logic());
        ensure!(r.passed(), "single box {s:?} fails {:?}", r.failed_ids());
        checked += 1;
    }
    for (i, l) in sides.iter().enumerate() {
        for r in &sides[i..] {
            let w = BoxWorld::new(
                BoxSpec::new(l.clone()).unwrap(),
                BoxSpec::new(r.clone()).unwrap(),
            )
            .unwrap();
            match boxlogic::box_world::TwoBoxLogic::build(&w, AXIOM_SWEEP_BUDGET) {
                Ok(logic) => {
                    let report = verify_logic_axioms(logic.logic());
                    ensure!(
                        report.passed(),
                        "{l:?} x {r:?} fails {:?}",
                        report.failed_ids()
                    );
                    checked += 1;
                }
                Err(Error::Budget(_)) => over_budget += 1,
                Err(e) => return Err(format!("{l:?} x {r:?}: {e}")),
            }
        }
    }

    // Fault injection: dropping any element leaves its complement without
    // a complement, and C2 must name the dropped set.
    let mut faults = 0;
    for logic in [
        built(&[2, 2], &[2, 2]).composite.logic().clone(),
        powerset(3),
    ] {
        for victim in logic.ids() {
            let dropped = logic.members(victim).clone();
            let family: Vec<Bits> = logic.sets().into_iter().filter(|s| *s != dropped).collect();
            let faulty =
                ConcreteLogic::from_family_unchecked(logic.ground().clone(), family).unwrap();
            let report = verify_logic_axioms(&faulty);
            let c2 = report.check("C2").unwrap();
            ensure!(!c2.passed(), "dropping {} went unnoticed", dropped.to_hex());
            let named = &c2.counterexample.as_ref().unwrap()["missing_complement"];
            ensure!(
                *named == dropped.to_hex(),
                "C2 named {named} instead of {}",
                dropped.to_hex()
            );
            faults += 1;
        }
    }
    // Adding a point and its complement to a single-box logic breaks
    // closure under disjoint unions.
    let single = built(&[2, 2], &[2, 2]).left.logic().clone();
    let g = single.ground().clone();
    let point = g.event(&[0]).unwrap();
    let mut family = single.sets();
    family.push(point.complement());
    family.push(point);
    let faulty = ConcreteLogic::from_family_unchecked(g, family).unwrap();
    let report = verify_logic_axioms(&faulty);
    let c3 = report.check("C3").unwrap();
    ensure!(
        !c3.passed() && c3.counterexample.is_some(),
        "added point went unnoticed"
    );
    faults += 1;

    Ok(format!(
        "{checked} logics pass C1-C3 and L1-L5 ({over_budget} worlds above the {AXIOM_SWEEP_BUDGET}-element sweep budget skipped); {faults} injected faults caught with named counterexamples"
    ))
}

fn free_product() -> Outcome {
    let mut sizes = Vec::new();
    for (l, r) in [([2, 2], [2, 2]), ([3, 2], [2, 3])] {
        let b = built(&l, &r);
        let report =
            verify_free_orthodistributive(&b.composite, &b.left, &b.right, &b.witness).unwrap();
        ensure!(report.checks.len() == 4, "{} checks", report.checks.len());
        ensure!(
            report.passed(),
            "{l:?} x {r:?} fails {:?}",
            report.failed_ids()
        );
        sizes.push(b.composite.logic().len());
    }
    Ok(format!(
        "(i)-(iv) pass on (2,2)x(2,2) [{} elements] and (3,2)x(2,3) [{} elements]",
        sizes[0], sizes[1]
    ))
}

fn strong_tensor_product() -> Outcome {
    let b = built(&[2, 2], &[2, 2]);
    let report = verify_strong_tensor_product(&b.composite, &b.left, &b.right, &b.witness).unwrap();
    ensure!(report.passed(), "fails {:?}", report.failed_ids());
    let states = two_valued_states(&b.composite).unwrap();
    ensure!(states.len() == 16, "{} two-valued states", states.len());
    let oracle = common::brute_force_deterministic(&b.world);
    let mut ours: Vec<Vec<Rational>> = states
        .iter()
        .map(|s| s.behavior().table().to_vec())
        .collect();
    ours.sort();
    ensure!(
        ours == oracle,
        "two-valued states differ from the brute-force 0/1 tables"
    );
    for s in &states {
        let (mu, nu) = factorize_two_valued(s).map_err(|e| e.to_string())?;
        ensure!(
            &product_state(&b.world, &mu, &nu).unwrap() == s.behavior(),
            "factorization does not round-trip"
        );
    }
    Ok("(i)-(iii) pass; all 16 two-valued states factorize and round-trip exactly".into())
}

fn atoms_identity() -> Outcome {
    let b = built(&[2, 2], &[2, 2]);
    ensure!(
        verify_atoms_product(&b.composite, &b.left, &b.right, &b.witness),
        "atoms identity fails"
    );
    ensure!(
        !b.left.logic().is_boolean() && !b.right.logic().is_boolean(),
        "a component is Boolean"
    );
    for (name, l) in [
        ("left", b.left.logic()),
        ("right", b.right.logic()),
        ("composite", b.composite.logic()),
    ] {
        ensure!(l.is_regular(), "{name} logic is not regular");
    }
    Ok("atoms identity holds, both components non-Boolean, all three logics regular".into())
}

fn polytope() -> Outcome {
    let b = built(&[2, 2], &[2, 2]);
    let vertices = chsh_vertices(&b);
    let mut ours: Vec<Vec<Rational>> = vertices.iter().map(|v| v.table().to_vec()).collect();
    ours.sort();
    let oracle = common::basis_enumeration_vertices(&b.world);
    ensure!(
        ours == oracle,
        "vertices differ from basis enumeration ({} vs {})",
        ours.len(),
        oracle.len()
    );
    ensure!(ours.len() == 24, "{} vertices", ours.len());
    let integral = ours
        .iter()
        .filter(|v| v.iter().all(|x| x.is_integer()))
        .count();
    let half = ours
        .iter()
        .filter(|v| {
            !v.iter().all(|x| x.is_integer()) && v.iter().all(|x| (x * rational(2, 1)).is_integer())
        })
        .count();
    ensure!(
        integral == 16 && half == 8,
        "{integral} integral, {half} half-integral"
    );
    let values: Vec<(bool, Rational)> = vertices
        .iter()
        .map(|v| (v.is_deterministic(), chsh_value(v).unwrap()))
        .collect();
    let max_all = values.iter().map(|(_, v)| v.clone()).max().unwrap();
    let max_int = values
        .iter()
        .filter(|(d, _)| *d)
        .map(|(_, v)| v.clone())
        .max()
        .unwrap();
    ensure!(
        max_all == rational(4, 1) && max_int == rational(2, 1),
        "CHSH maxima {max_all} and {max_int}"
    );
    Ok("24 vertices (16 integral, 8 half-integral) match basis enumeration; CHSH max 4 overall, 2 on integral vertices".into())
}

fn well_definedness() -> Outcome {
    let b = built(&[2, 2], &[2, 2]);
    let logic = b.composite.logic();
    let mut evaluations = 0;
    for v in chsh_vertices(&b) {
        let s = v.atom_state(&b.composite).unwrap();
        for id in logic.ids() {
            let values = s.values_over_all_covers(logic, logic.members(id));
            ensure!(
                values.len() == 1,
                "event {} takes values {values:?}",
                logic.members(id).to_hex()
            );
            evaluations += 1;
        }
    }
    Ok(format!(
        "{evaluations} (vertex, event) pairs, every exact cover gives the same value"
    ))
}

fn weak_conditions() -> Outcome {
    let b = built(&[2, 2], &[2, 2]);
    let v = chsh_vertices(&b);
    let report = verify_weak_conditions(&b.composite, &b.left, &b.right, &b.witness, &v).unwrap();
    ensure!(report.passed(), "fails {:?}", report.failed_ids());
    let events = report
        .check("weak.ii_prime.vertex_certified")
        .unwrap()
        .counts["events"];
    Ok(format!(
        "(ii'') pass over 16 product states; (ii') vertex-certified pass on {events} events"
    ))
}

fn run_verify(spec: &Path, out: &Path) -> (i32, Vec<u8>) {
    let output = Command::new(env!("CARGO_BIN_EXE_boxlogic"))
        .args(["verify", "--spec"])
        .arg(spec)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap();
    (output.status.code().unwrap_or(-1), output.stdout)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("chsh.json");
    std::fs::write(
        &spec,
        r#"{"left":{"inputs":[2,2]},"right":{"inputs":[2,2]}}"#,
    )
    .unwrap();
    let (code_a, out_a) = run_verify(&spec, &dir.path().join("a"));
    let (code_b, out_b) = run_verify(&spec, &dir.path().join("b"));
    ensure!(
        code_a == 0 && code_b == 0,
        "exit codes {code_a} and {code_b}"
    );
    ensure!(out_a == out_b, "stdout differs between runs");
    let read = |d: &str| std::fs::read(dir.path().join(d).join("verify.json")).unwrap();
    ensure!(read("a") == read("b"), "artifacts differ between runs");
    ensure!(read("a") == out_a, "artifact differs from stdout");
    Ok(format!(
        "two runs of `verify` produce byte-identical output ({} bytes)",
        out_a.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("construction fidelity", construction_fidelity),
        ("axiom suite", axiom_suite),
        ("free orthodistributive product", free_product),
        ("strong tensor product", strong_tensor_product),
        (
            "atoms identity with non-Boolean regular components",
            atoms_identity,
        ),
        ("no-signaling polytope and CHSH", polytope),
        ("well-defined evaluation", well_definedness),
        ("weak tensor conditions", weak_conditions),
        ("deterministic CLI output", determinism),
    ];
    let started = Instant::now();
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!(
                "criterion {}: PASS  {name}: {detail} [{elapsed:.2}s]",
                i + 1
            ),
            Err(detail) => {
                failures += 1;
                println!(
                    "criterion {}: FAIL  {name}: {detail} [{elapsed:.2}s]",
                    i + 1
                );
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass in {:.1}s",
        criteria.len() - failures,
        criteria.len(),
        started.elapsed().as_secs_f64()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
