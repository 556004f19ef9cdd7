//! Exhaustive verification that a two-box logic is a free orthodistributive
//! product and a strong tensor product of its single-box logics.

use std::collections::BTreeSet;

use serde_json::json;

use crate::bits::Bits;
use crate::box_world::{BuiltWorld, ProductWitness, SingleBoxLogic, TwoBoxLogic};
use crate::error::Result;
use crate::logic::{ConcreteLogic, EventId};
use crate::report::{Check, Report};
use crate::states::{
    component_two_valued_states, enumerate_two_valued_states, product_state,
    richness_counterexample, AtomState, Behavior, ComponentState,
};

fn hex(logic: &ConcreteLogic, id: EventId) -> String {
    logic.members(id).to_hex()
}

/// Injective, unit- and complement-preserving, order-preserving and additive
/// on orthogonal pairs.
fn monomorphism_failure(
    component: &ConcreteLogic,
    target: &ConcreteLogic,
    map: &[EventId],
) -> Option<serde_json::Value> {
    if map.len() != component.len() {
        return Some(json!({"table_len": map.len(), "expected": component.len()}));
    }
    if map.iter().any(|id| id.0 >= target.len()) {
        return Some(json!({"reason": "image index out of range"}));
    }
    let image = |p: EventId| target.members(map[p.0]);
    let top = component.top()?;
    if !image(top).is_full() {
        return Some(
            json!({"element": hex(component, top), "reason": "unit not preserved", "image": image(top).to_hex()}),
        );
    }
    let mut seen = std::collections::HashMap::new();
    for p in component.ids() {
        if let Some(q) = seen.insert(map[p.0], p) {
            return Some(
                json!({"element": hex(component, p), "other": hex(component, q), "reason": "not injective"}),
            );
        }
        if let Some(pc) = component.complement_id(p) {
            if image(pc) != &image(p).complement() {
                return Some(
                    json!({"element": hex(component, p), "reason": "complement not preserved"}),
                );
            }
        }
    }
    for p in component.ids() {
        for q in component.ids() {
            let (mp, mq) = (component.members(p), component.members(q));
            if mp.is_subset(mq) && !image(p).is_subset(image(q)) {
                return Some(
                    json!({"element": hex(component, p), "other": hex(component, q), "reason": "order not preserved"}),
                );
            }
            if p < q && mp.is_disjoint(mq) {
                if let Some(r) = component.find(&mp.union(mq)) {
                    if image(r) != &image(p).union(image(q)) {
                        return Some(
                            json!({"element": hex(component, p), "other": hex(component, q), "reason": "orthogonal join not preserved"}),
                        );
                    }
                }
            }
        }
    }
    None
}

/// Elements of the smallest subset of the logic that contains `generators`,
/// `0` and `1` and is closed under complement, orthogonal joins and every
/// meet that exists in the logic.
///
/// Once every atom is generated the result is the whole logic, since each
/// element is an orthogonal join of atoms through its canonical cover.
pub fn generated_elements(logic: &ConcreteLogic, generators: &[EventId]) -> BTreeSet<EventId> {
    let mut set: BTreeSet<EventId> = generators.iter().copied().collect();
    set.extend(logic.bottom());
    set.extend(logic.top());
    let decomposable = logic.canonical_covers().iter().all(Option::is_some);
    let has_all_atoms = |set: &BTreeSet<EventId>| logic.atoms().iter().all(|a| set.contains(a));
    // Meets that are plain intersections are found in the worklist pass;
    // the rarer non-set meets are swept afterwards.
    loop {
        let mut frontier: Vec<EventId> = set.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            if decomposable && has_all_atoms(&set) {
                return logic.ids().collect();
            }
            let mx = logic.members(x);
            let mut found = Vec::new();
            found.extend(logic.complement_id(x));
            for &y in &set {
                let my = logic.members(y);
                if mx.is_disjoint(my) {
                    found.extend(logic.find(&mx.union(my)));
                }
                found.extend(logic.find(&mx.intersection(my)));
            }
            for z in found {
                if set.insert(z) {
                    frontier.push(z);
                }
            }
        }
        if set.len() == logic.len() {
            return set;
        }
        let current: Vec<EventId> = set.iter().copied().collect();
        let extra: Vec<EventId> = current
            .iter()
            .enumerate()
            .flat_map(|(i, &x)| {
                current[i + 1..]
                    .iter()
                    .filter_map(move |&y| logic.meet(x, y))
            })
            .filter(|z| !set.contains(z))
            .collect();
        if extra.is_empty() {
            return set;
        }
        set.extend(extra);
    }
}

/// Whether `generators` generate the whole logic.
fn generation_failure(logic: &ConcreteLogic, generators: &[EventId]) -> Option<serde_json::Value> {
    let generated = generated_elements(logic, generators);
    if generated.len() == logic.len() {
        return None;
    }
    let missing = logic.ids().find(|id| !generated.contains(id));
    Some(json!({
        "generated": generated.len(),
        "expected": logic.len(),
        "missing": missing.map(|id| hex(logic, id)),
    }))
}

pub fn verify_free_orthodistributive(
    composite: &TwoBoxLogic,
    left: &SingleBoxLogic,
    right: &SingleBoxLogic,
    w: &ProductWitness,
) -> Result<Report> {
    let logic = composite.logic();
    let (l1, l2) = (left.logic(), right.logic());
    let mut report = Report::new("free_orthodistributive_product");

    let failure = monomorphism_failure(l1, logic, &w.u_map)
        .map(|c| json!({"map": "u", "detail": c}))
        .or_else(|| {
            monomorphism_failure(l2, logic, &w.v_map).map(|c| json!({"map": "v", "detail": c}))
        });
    report.push(
        Check::new("free.i.monomorphisms")
            .count("u_elements", w.u_map.len())
            .count("v_elements", w.v_map.len())
            .with_result(failure),
    );
    if !report.passed() {
        // Later checks index through the tables and assume they are sane.
        let shape_ok = w.u_map.len() == l1.len()
            && w.v_map.len() == l2.len()
            && w.u_map.iter().chain(&w.v_map).all(|id| id.0 < logic.len());
        if !shape_ok {
            return Ok(report);
        }
    }

    let images: Vec<EventId> = w
        .u_map
        .iter()
        .chain(&w.v_map)
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    report.push(
        Check::new("free.ii.generation")
            .count("generators", images.len())
            .count("elements", logic.len())
            .with_result(generation_failure(logic, &images)),
    );

    let mut meets = Check::new("free.iii.nonzero_meets");
    let mut compat = Check::new("free.iv.compatibility");
    let mut pairs = 0;
    for p in l1.ids() {
        for q in l2.ids() {
            pairs += 1;
            let (up, vq) = (w.u_map[p.0], w.v_map[q.0]);
            let zero_expected = l1.members(p).is_empty() || l2.members(q).is_empty();
            match logic.meet(up, vq) {
                None => meets.fail(
                    json!({"a": hex(l1, p), "b": hex(l2, q), "reason": "meet does not exist"}),
                ),
                Some(m) if logic.members(m).is_empty() != zero_expected => {
                    meets.fail(json!({"a": hex(l1, p), "b": hex(l2, q), "meet": hex(logic, m)}))
                }
                _ => {}
            }
            if !logic.compatible_ids(up, vq) {
                compat.fail(json!({"a": hex(l1, p), "b": hex(l2, q)}));
            }
        }
    }
    report.push(meets.count("pairs", pairs));
    report.push(compat.count("pairs", pairs));
    Ok(report)
}

/// The atoms of the composite logic are exactly the meets `u(p) ^ v(q)` of
/// component atoms.
pub fn verify_atoms_product(
    composite: &TwoBoxLogic,
    left: &SingleBoxLogic,
    right: &SingleBoxLogic,
    w: &ProductWitness,
) -> bool {
    let logic = composite.logic();
    let mut meets = BTreeSet::new();
    for &p in left.logic().atoms() {
        for &q in right.logic().atoms() {
            match w
                .u_map
                .get(p.0)
                .zip(w.v_map.get(q.0))
                .and_then(|(&u, &v)| logic.meet(u, v))
            {
                Some(m) => {
                    meets.insert(m);
                }
                None => return false,
            }
        }
    }
    let atoms: BTreeSet<EventId> = logic.atoms().iter().copied().collect();
    meets == atoms
}

/// Point-measure product states `Psi(mu, nu)` for all two-valued component
/// states.
pub fn product_two_valued_states(
    composite: &TwoBoxLogic,
    left: &SingleBoxLogic,
    right: &SingleBoxLogic,
) -> Result<Vec<(ComponentState, ComponentState, Behavior)>> {
    let mus = component_two_valued_states(left)?;
    let nus = component_two_valued_states(right)?;
    let mut out = Vec::with_capacity(mus.len() * nus.len());
    for mu in &mus {
        for nu in &nus {
            let b = product_state(composite.world(), mu, nu)?;
            out.push((mu.clone(), nu.clone(), b));
        }
    }
    Ok(out)
}

/// Richness of `states` as a report entry.
pub fn richness_check(
    check_id: &str,
    states: &[AtomState],
    logic: &ConcreteLogic,
) -> Result<Check> {
    let failure = richness_counterexample(states, logic)?.map(|(a, b)| {
        json!({"a": hex(logic, a), "b": hex(logic, b), "reason": "every state certain of a is certain of b, yet a is not below b"})
    });
    Ok(Check::new(check_id)
        .count("states", states.len())
        .count("elements", logic.len())
        .with_result(failure))
}

pub fn verify_strong_tensor_product(
    composite: &TwoBoxLogic,
    left: &SingleBoxLogic,
    right: &SingleBoxLogic,
    w: &ProductWitness,
) -> Result<Report> {
    let products = product_two_valued_states(composite, left, right)?;
    let states = products
        .iter()
        .map(|(_, _, b)| b.atom_state(composite))
        .collect::<Result<Vec<_>>>()?;
    verify_strong_tensor_product_with(composite, left, right, w, &states)
}

/// As [`verify_strong_tensor_product`], with the state set used for the
/// richness condition supplied by the caller.
pub fn verify_strong_tensor_product_with(
    composite: &TwoBoxLogic,
    left: &SingleBoxLogic,
    right: &SingleBoxLogic,
    w: &ProductWitness,
    rich_candidates: &[AtomState],
) -> Result<Report> {
    let logic = composite.logic();
    let (l1, l2) = (left.logic(), right.logic());
    let mut report = Report::new("strong_tensor_product");

    // Condition (i) over all deterministic component states and the uniform
    // ones.
    let mut mus = component_two_valued_states(left)?;
    mus.push(ComponentState::uniform(left.spec()));
    let mut nus = component_two_valued_states(right)?;
    nus.push(ComponentState::uniform(right.spec()));
    let mut values = Check::new("strong.i.product_values");
    let mut evaluations = 0;
    if w.phi_map.len() != l1.len() * l2.len() || w.phi_map.iter().any(|id| id.0 >= logic.len()) {
        values.fail(json!({"reason": "Phi table has the wrong shape"}));
    } else {
        let mu_values = mus
            .iter()
            .map(|m| m.atom_state(left)?.values(l1))
            .collect::<Result<Vec<_>>>()?;
        let nu_values = nus
            .iter()
            .map(|n| n.atom_state(right)?.values(l2))
            .collect::<Result<Vec<_>>>()?;
        'outer: for (mu, mv) in mus.iter().zip(&mu_values) {
            for (nu, nv) in nus.iter().zip(&nu_values) {
                let psi = product_state(composite.world(), mu, nu)?.atom_state(composite)?;
                for p in l1.ids() {
                    for q in l2.ids() {
                        evaluations += 1;
                        let lhs = psi.value(logic, w.phi(p, q))?;
                        let rhs = &mv[p.0] * &nv[q.0];
                        if lhs != rhs {
                            values.fail(json!({
                                "a": hex(l1, p), "b": hex(l2, q),
                                "psi_of_phi": lhs.to_string(), "product": rhs.to_string(),
                            }));
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    report.push(
        values
            .count("evaluations", evaluations)
            .count("state_pairs", mus.len() * nus.len()),
    );

    report.push(richness_check(
        "strong.ii.richness",
        rich_candidates,
        logic,
    )?);

    let phi_images: Vec<EventId> = w
        .phi_map
        .iter()
        .copied()
        .filter(|id| id.0 < logic.len())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    report.push(
        Check::new("strong.iii.generation")
            .count("generators", phi_images.len())
            .with_result(generation_failure(logic, &phi_images)),
    );
    Ok(report)
}

/// Elements of the forms used by the weak tensor product conditions:
/// images `Phi(a, b)` (which include `Phi(a, 1)` and `Phi(1, b)`) and every
/// meet of finitely many of them that exists in the logic.
pub fn weak_condition_events(composite: &TwoBoxLogic, w: &ProductWitness) -> Vec<EventId> {
    let logic = composite.logic();
    let mut set: BTreeSet<EventId> = w.phi_map.iter().copied().collect();
    let mut frontier: Vec<EventId> = set.iter().copied().collect();
    while let Some(x) = frontier.pop() {
        let current: Vec<EventId> = set.iter().copied().collect();
        for y in current {
            if let Some(m) = logic.meet(x, y) {
                if set.insert(m) {
                    frontier.push(m);
                }
            }
        }
    }
    set.into_iter().collect()
}

/// Conditions (ii') and (ii'') of the weak tensor product, certified on a
/// finite list of states (normally the vertices of the state polytope).
pub fn verify_weak_conditions(
    composite: &TwoBoxLogic,
    left: &SingleBoxLogic,
    right: &SingleBoxLogic,
    w: &ProductWitness,
    vertices: &[Behavior],
) -> Result<Report> {
    let logic = composite.logic();
    let products = product_two_valued_states(composite, left, right)?;
    let product_states = products
        .iter()
        .map(|(_, _, b)| b.atom_state(composite))
        .collect::<Result<Vec<_>>>()?;
    let vertex_states = vertices
        .iter()
        .map(|b| b.atom_state(composite))
        .collect::<Result<Vec<_>>>()?;
    let mut report = Report::new("weak_tensor_conditions");

    let product_levels = product_states
        .iter()
        .map(|s| s.level_sets(logic))
        .collect::<Result<Vec<_>>>()?;
    let vertex_levels = vertex_states
        .iter()
        .map(|s| s.level_sets(logic))
        .collect::<Result<Vec<_>>>()?;
    // Per element: product states vanishing on it, product states certain of
    // it, and vertices not vanishing on it.
    let mut product_zero = vec![Bits::empty(product_states.len()); logic.len()];
    let mut product_one = vec![Bits::empty(product_states.len()); logic.len()];
    for (s, levels) in product_levels.iter().enumerate() {
        for e in levels.zero.ones() {
            product_zero[e].insert(s);
        }
        for e in levels.one.ones() {
            product_one[e].insert(s);
        }
    }
    let mut vertex_nonzero = vec![Bits::full(vertices.len()); logic.len()];
    for (i, levels) in vertex_levels.iter().enumerate() {
        for e in levels.zero.ones() {
            vertex_nonzero[e].remove(i);
        }
    }
    // Vertices that vanish on every element annihilated by all of `states`.
    let superpositions_of = |states: &Bits| {
        let mut excluded = Bits::empty(vertices.len());
        for e in 0..logic.len() {
            if states.is_subset(&product_zero[e]) {
                excluded.union_with(&vertex_nonzero[e]);
            }
        }
        excluded.complement()
    };

    let members = superpositions_of(&Bits::full(product_states.len()));
    let mut dense = Check::new("weak.ii_double_prime.vertex_certified")
        .count("vertices", vertices.len())
        .count("product_states", product_states.len());
    if let Some(outside) = members.complement().first() {
        dense.fail(json!({"vertex": vertices[outside].to_json(), "reason": "not a superposition of product states"}));
    }
    report.push(dense);

    let events = weak_condition_events(composite, w);
    let mut certain = Check::new("weak.ii_prime.vertex_certified").count("events", events.len());
    for &c in &events {
        let lhs: Vec<usize> = (0..vertices.len())
            .filter(|&i| vertex_levels[i].one.contains(c.0))
            .collect();
        let rhs: Vec<usize> = superpositions_of(&product_one[c.0]).ones().collect();
        if lhs != rhs {
            certain.fail(json!({"event": hex(logic, c), "certain_vertices": lhs, "superposition_vertices": rhs}));
            break;
        }
    }
    report.push(certain);
    Ok(report)
}

/// A logic is set-representable iff its two-valued states are rich.
pub fn is_set_representable(logic: &ConcreteLogic) -> Result<bool> {
    Ok(richness_counterexample(&enumerate_two_valued_states(logic)?, logic)?.is_none())
}

/// Facts about the three logics that are reported alongside the checks.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LogicFacts {
    pub elements: usize,
    pub atoms: usize,
    pub atomistic: bool,
    pub lattice: bool,
    pub boolean: bool,
    pub regular: bool,
}

impl LogicFacts {
    pub fn of(logic: &ConcreteLogic) -> Self {
        LogicFacts {
            elements: logic.len(),
            atoms: logic.atoms().len(),
            atomistic: logic.is_atomistic(),
            lattice: logic.is_lattice(),
            boolean: logic.is_boolean(),
            regular: logic.is_regular(),
        }
    }
}

/// Runs every verifier on a built world. `vertices` feeds the weak
/// conditions; pass `None` to skip them.
pub fn verify_world(built: &BuiltWorld, vertices: Option<&[Behavior]>) -> Result<Report> {
    let (c, l, r, w) = (&built.composite, &built.left, &built.right, &built.witness);
    let mut report = Report::new("box_world");
    report
        .checks
        .extend(verify_free_orthodistributive(c, l, r, w)?.checks);
    report.push(
        Check::new("atoms.product_of_component_atoms").with_result(
            (!verify_atoms_product(c, l, r, w))
                .then(|| json!({"reason": "atoms differ from meets of component atoms"})),
        ),
    );
    report
        .checks
        .extend(verify_strong_tensor_product(c, l, r, w)?.checks);
    if let Some(v) = vertices {
        report
            .checks
            .extend(verify_weak_conditions(c, l, r, w, v)?.checks);
    }
    for (name, logic) in [
        ("left", l.logic()),
        ("right", r.logic()),
        ("composite", c.logic()),
    ] {
        report.push(
            Check::new(format!("set_representable.{name}")).with_result(
                (!is_set_representable(logic)?)
                    .then(|| json!({"reason": "two-valued states are not rich"})),
            ),
        );
    }
    Ok(report)
}
