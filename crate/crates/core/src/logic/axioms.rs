//! Exhaustive check of the quantum-logic axioms L1-L5 and the concrete-logic
//! axioms C1-C3 on a finite family.

use serde_json::json;

use super::{ConcreteLogic, EventId};
use crate::report::{Check, Report};

fn hex(logic: &ConcreteLogic, id: EventId) -> String {
    logic.members(id).to_hex()
}

pub fn verify_logic_axioms(logic: &ConcreteLogic) -> Report {
    let n = logic.len();
    let ids: Vec<EventId> = logic.ids().collect();
    let empty = logic.ground().empty_event();
    let mut report = Report::new("logic_axioms");

    // Orthocomplement as a map on the family; None where the set complement
    // is missing.
    let complement: Vec<Option<EventId>> = ids.iter().map(|&p| logic.complement_id(p)).collect();

    report.push(
        Check::new("C1")
            .count("elements", n)
            .with_result((!logic.contains(&empty)).then(|| json!({"missing": "empty set"}))),
    );

    let mut c2 = Check::new("C2").count("elements", n);
    if let Some(p) = ids.iter().find(|p| complement[p.0].is_none()) {
        c2.fail(json!({"element": hex(logic, *p), "missing_complement": logic.members(*p).complement().to_hex()}));
    }
    report.push(c2);

    let mut c3 = Check::new("C3");
    let mut disjoint_pairs = 0;
    for i in 0..n {
        for j in i + 1..n {
            let (p, q) = (logic.members(EventId(i)), logic.members(EventId(j)));
            if p.is_disjoint(q) {
                disjoint_pairs += 1;
                if !logic.contains(&p.union(q)) {
                    c3.fail(json!({"p": p.to_hex(), "q": q.to_hex(), "missing_union": p.union(q).to_hex()}));
                }
            }
        }
    }
    report.push(c3.count("disjoint_pairs", disjoint_pairs));

    report.push(
        Check::new("L1").with_result(match (logic.bottom(), logic.top()) {
            (Some(_), Some(_)) => None,
            (None, _) => Some(json!({"missing": "least element"})),
            (_, None) => Some(json!({"missing": "greatest element"})),
        }),
    );

    // L2 and L3 read the complement map through the family; an element
    // without a complement already fails both.
    let mut l2 = Check::new("L2");
    let mut comparable = 0;
    for &p in &ids {
        for &q in &ids {
            if !logic.members(p).is_subset(logic.members(q)) {
                continue;
            }
            comparable += 1;
            let ok = match (complement[p.0], complement[q.0]) {
                (Some(pc), Some(qc)) => logic.members(qc).is_subset(logic.members(pc)),
                _ => false,
            };
            if !ok {
                l2.fail(json!({"p": hex(logic, p), "q": hex(logic, q)}));
            }
        }
    }
    report.push(l2.count("comparable_pairs", comparable));

    let mut l3 = Check::new("L3").count("elements", n);
    for &p in &ids {
        if complement[p.0].and_then(|c| complement[c.0]) != Some(p) {
            l3.fail(json!({"p": hex(logic, p)}));
        }
    }
    report.push(l3);

    // Finite orthogonal families: binary suprema suffice by induction.
    let mut l4 = Check::new("L4");
    let mut orthogonal = 0;
    for i in 0..n {
        let Some(ic) = complement[i] else { continue };
        for j in i + 1..n {
            if logic.members(EventId(j)).is_subset(logic.members(ic)) {
                orthogonal += 1;
                if logic.join(EventId(i), EventId(j)).is_none() {
                    l4.fail(json!({"p": hex(logic, EventId(i)), "q": hex(logic, EventId(j)), "missing": "supremum"}));
                }
            }
        }
    }
    report.push(l4.count("orthogonal_pairs", orthogonal));

    let mut l5 = Check::new("L5");
    let mut checked = 0;
    for &p in &ids {
        let Some(pc) = complement[p.0] else { continue };
        for &q in &ids {
            if !logic.members(p).is_subset(logic.members(q)) {
                continue;
            }
            checked += 1;
            let rebuilt = logic.meet(q, pc).and_then(|r| logic.join(p, r));
            if rebuilt != Some(q) {
                l5.fail(json!({"p": hex(logic, p), "q": hex(logic, q)}));
            }
        }
    }
    report.push(l5.count("comparable_pairs", checked));

    report
}

#[cfg(test)]
mod tests {
    use super::super::tests::single_box_2x2;
    use super::super::GroundSet;
    use super::*;

    #[test]
    fn generated_logic_passes_everything() {
        let r = verify_logic_axioms(&single_box_2x2());
        assert!(r.passed(), "{:?}", r.failed_ids());
        assert_eq!(r.checks.len(), 8);
    }

    #[test]
    fn missing_complement_fails_c2_with_witness() {
        let g = GroundSet::plain(2);
        let family = vec![g.empty_event(), g.event(&[0]).unwrap(), g.full_event()];
        let l = ConcreteLogic::from_family_unchecked(g, family).unwrap();
        let r = verify_logic_axioms(&l);
        let c2 = r.check("C2").unwrap();
        assert!(!c2.passed());
        assert_eq!(
            c2.counterexample.as_ref().unwrap()["missing_complement"],
            "2"
        );
        assert!(r.check("C1").unwrap().passed());
    }

    #[test]
    fn missing_disjoint_union_fails_c3() {
        let g = GroundSet::plain(4);
        let sets = [
            vec![],
            vec![0],
            vec![1, 2, 3],
            vec![1],
            vec![0, 2, 3],
            vec![0, 1, 2, 3],
        ];
        let family = sets.iter().map(|s| g.event(s).unwrap()).collect();
        let l = ConcreteLogic::from_family_unchecked(g, family).unwrap();
        let r = verify_logic_axioms(&l);
        assert!(!r.check("C3").unwrap().passed());
        assert!(r.check("C2").unwrap().passed());
    }
}
