//! Phase spaces and logics of single boxes and of two-box worlds, with the
//! embeddings of the single-box logics into the composite logic.

use serde::Serialize;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::logic::{
    are_isomorphic, zero_one_pasting, ConcreteLogic, EventId, GroundSet, Orthoposet, Point,
    DEFAULT_BUDGET,
};

/// Inputs of one box and the number of outcomes of each input.
///
/// Inputs and outcomes are numbered from zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxSpec {
    outcome_sizes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Vec<String>>>,
}

impl BoxSpec {
    pub fn new(outcome_sizes: Vec<usize>) -> Result<Self> {
        if outcome_sizes.is_empty() {
            return Err(Error::Input("a box needs at least one input".into()));
        }
        if let Some(a) = outcome_sizes.iter().position(|&k| k == 0) {
            return Err(Error::Input(format!(
                "input {} must have at least one outcome",
                a + 1
            )));
        }
        Ok(BoxSpec {
            outcome_sizes,
            labels: None,
        })
    }

    /// Attaches outcome names; one list per input, matching the sizes.
    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.outcome_sizes.len()
            || labels
                .iter()
                .zip(&self.outcome_sizes)
                .any(|(l, &k)| l.len() != k)
        {
            return Err(Error::Input(
                "outcome labels do not match the outcome counts".into(),
            ));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn input_count(&self) -> usize {
        self.outcome_sizes.len()
    }

    pub fn outcome_sizes(&self) -> &[usize] {
        &self.outcome_sizes
    }

    pub fn outcomes(&self, input: usize) -> usize {
        self.outcome_sizes[input]
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    /// Index of a named outcome of `input`, or of a decimal index.
    pub fn outcome_index(&self, input: usize, name: &str) -> Option<usize> {
        if let Some(labels) = &self.labels {
            if let Some(i) = labels[input].iter().position(|l| l == name) {
                return Some(i);
            }
        }
        name.parse().ok().filter(|&i| i < self.outcome_sizes[input])
    }

    /// `|Gamma_i|`, the number of deterministic outcome assignments.
    pub fn phase_space_size(&self) -> usize {
        self.outcome_sizes.iter().product()
    }

    fn check_input(&self, input: usize, outcomes: &[usize]) -> Result<()> {
        if input >= self.input_count() {
            return Err(Error::Input(format!(
                "input {input} out of range (box has {})",
                self.input_count()
            )));
        }
        if let Some(o) = outcomes.iter().find(|&&o| o >= self.outcome_sizes[input]) {
            return Err(Error::Input(format!(
                "outcome {o} out of range for input {input}"
            )));
        }
        Ok(())
    }
}

/// Logic of a single box: generated in the powerset of its phase space by the
/// cylinders `[a alpha] = {x : x_a = alpha}`.
#[derive(Clone, Debug)]
pub struct SingleBoxLogic {
    spec: BoxSpec,
    logic: ConcreteLogic,
    /// `(input, outcome)` of each atom, by atom position.
    atom_labels: Vec<(usize, usize)>,
}

impl SingleBoxLogic {
    pub fn build(spec: &BoxSpec, budget: usize) -> Result<Self> {
        let ground = GroundSet::single_box(spec.outcome_sizes())?;
        let mut generators = Vec::new();
        let mut labels = Vec::new();
        for a in 0..spec.input_count() {
            for alpha in 0..spec.outcomes(a) {
                generators.push(cylinder_in(&ground, a, &[alpha]));
                labels.push((a, alpha));
            }
        }
        let logic = ConcreteLogic::generate(ground, &generators, budget)?;
        let atom_labels = label_atoms(&logic, &generators, &labels)?;
        Ok(SingleBoxLogic {
            spec: spec.clone(),
            logic,
            atom_labels,
        })
    }

    pub fn spec(&self) -> &BoxSpec {
        &self.spec
    }

    pub fn logic(&self) -> &ConcreteLogic {
        &self.logic
    }

    pub fn atom_labels(&self) -> &[(usize, usize)] {
        &self.atom_labels
    }

    /// The element `[a in A] = {x : x_a in A}`.
    pub fn cylinder(&self, input: usize, outcomes: &[usize]) -> Result<Bits> {
        self.spec.check_input(input, outcomes)?;
        Ok(cylinder_in(self.logic.ground(), input, outcomes))
    }

    /// Checks that the logic is isomorphic, as an orthoposet, to the
    /// abstract 0-1 pasting of the powersets of the outcome sets.
    pub fn is_pasting_of_outcome_powersets(&self) -> Result<bool> {
        let blocks = self
            .spec
            .outcome_sizes()
            .iter()
            .map(|&k| {
                let g = GroundSet::plain(k);
                let singletons: Vec<Bits> = (0..k).map(|i| g.event(&[i]).unwrap()).collect();
                ConcreteLogic::generate(g, &singletons, DEFAULT_BUDGET)
            })
            .collect::<Result<Vec<_>>>()?;
        let mine = self.logic.orthoposet()?;
        // Single-outcome inputs contribute no proper elements to either view.
        let realized = zero_one_pasting(&blocks)?;
        let abstract_view = Orthoposet::abstract_pasting(&blocks)?;
        Ok(are_isomorphic(&mine, &abstract_view, DEFAULT_BUDGET)?
            && are_isomorphic(&realized.orthoposet()?, &abstract_view, DEFAULT_BUDGET)?)
    }
}

fn cylinder_in(ground: &GroundSet, input: usize, outcomes: &[usize]) -> Bits {
    ground.event_where(|p| matches!(p, Point::Tuple(x) if outcomes.contains(&x[input])))
}

/// Matches every atom with the first generator equal to it.
fn label_atoms<T: Copy>(
    logic: &ConcreteLogic,
    generators: &[Bits],
    labels: &[T],
) -> Result<Vec<T>> {
    logic
        .atoms()
        .iter()
        .map(|&a| {
            generators
                .iter()
                .position(|g| g == logic.members(a))
                .map(|i| labels[i])
                .ok_or_else(|| {
                    Error::Invariant(format!(
                        "atom {} is not a generator",
                        logic.members(a).to_hex()
                    ))
                })
        })
        .collect()
}

/// Coordinates of one joint outcome: inputs `(a, b)` and outcomes
/// `(alpha, beta)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct JointOutcome {
    pub a: usize,
    pub b: usize,
    pub alpha: usize,
    pub beta: usize,
}

/// Two boxes and their phase spaces `Gamma_1`, `Gamma_2`, `Gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxWorld {
    left: BoxSpec,
    right: BoxSpec,
    gamma1: GroundSet,
    gamma2: GroundSet,
    gamma: GroundSet,
}

impl BoxWorld {
    pub fn new(left: BoxSpec, right: BoxSpec) -> Result<Self> {
        let gamma1 = GroundSet::single_box(left.outcome_sizes())?;
        let gamma2 = GroundSet::single_box(right.outcome_sizes())?;
        let gamma = GroundSet::composite(left.outcome_sizes(), right.outcome_sizes())?;
        Ok(BoxWorld {
            left,
            right,
            gamma1,
            gamma2,
            gamma,
        })
    }

    pub fn left(&self) -> &BoxSpec {
        &self.left
    }

    pub fn right(&self) -> &BoxSpec {
        &self.right
    }

    pub fn gamma1(&self) -> &GroundSet {
        &self.gamma1
    }

    pub fn gamma2(&self) -> &GroundSet {
        &self.gamma2
    }

    pub fn gamma(&self) -> &GroundSet {
        &self.gamma
    }

    /// Input pairs `(a, b)` in row-major order.
    pub fn contexts(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.right.input_count();
        (0..self.left.input_count() * m).map(move |i| (i / m, i % m))
    }

    pub fn context_count(&self) -> usize {
        self.left.input_count() * self.right.input_count()
    }

    /// Number of joint outcomes `sum_{a,b} |U_a| |V_b|`.
    pub fn joint_outcome_count(&self) -> usize {
        let left: usize = self.left.outcome_sizes().iter().sum();
        let right: usize = self.right.outcome_sizes().iter().sum();
        left * right
    }

    /// All joint outcomes: contexts row-major, then `alpha`, then `beta`.
    pub fn joint_outcomes(&self) -> Vec<JointOutcome> {
        let mut out = Vec::with_capacity(self.joint_outcome_count());
        for (a, b) in self.contexts() {
            for alpha in 0..self.left.outcomes(a) {
                for beta in 0..self.right.outcomes(b) {
                    out.push(JointOutcome { a, b, alpha, beta });
                }
            }
        }
        out
    }

    /// `[a in A, b in B] = {(x, y) : x_a in A, y_b in B}`. Empty when either
    /// outcome set is empty.
    pub fn question_event(
        &self,
        a: usize,
        outcomes_a: &[usize],
        b: usize,
        outcomes_b: &[usize],
    ) -> Result<Bits> {
        self.left.check_input(a, outcomes_a)?;
        self.right.check_input(b, outcomes_b)?;
        Ok(self.gamma.event_where(|p| match p {
            Point::Pair(x, y) => outcomes_a.contains(&x[a]) && outcomes_b.contains(&y[b]),
            _ => unreachable!(),
        }))
    }

    pub fn atom_event(&self, o: JointOutcome) -> Result<Bits> {
        self.question_event(o.a, &[o.alpha], o.b, &[o.beta])
    }

    /// `u(p) = {(x, y) : x in p}`.
    pub fn embed_left(&self, left: &SingleBoxLogic, p: &Bits) -> Result<Bits> {
        left.logic().require(p)?;
        let width = self.gamma2.len();
        Ok(Bits::from_predicate(self.gamma.len(), |i| {
            p.contains(i / width)
        }))
    }

    /// `v(q) = {(x, y) : y in q}`.
    pub fn embed_right(&self, right: &SingleBoxLogic, q: &Bits) -> Result<Bits> {
        right.logic().require(q)?;
        let width = self.gamma2.len();
        Ok(Bits::from_predicate(self.gamma.len(), |i| {
            q.contains(i % width)
        }))
    }
}

/// The composite logic of a two-box world, generated in the powerset of
/// `Gamma` by the questions `[a alpha, b beta]`.
#[derive(Clone, Debug)]
pub struct TwoBoxLogic {
    world: BoxWorld,
    logic: ConcreteLogic,
    atom_labels: Vec<JointOutcome>,
}

impl TwoBoxLogic {
    pub fn build(world: &BoxWorld, budget: usize) -> Result<Self> {
        let outcomes = world.joint_outcomes();
        let generators = outcomes
            .iter()
            .map(|&o| world.atom_event(o))
            .collect::<Result<Vec<_>>>()?;
        let logic = ConcreteLogic::generate(world.gamma().clone(), &generators, budget)?;
        let atom_labels = label_atoms(&logic, &generators, &outcomes)?;
        Ok(TwoBoxLogic {
            world: world.clone(),
            logic,
            atom_labels,
        })
    }

    pub fn world(&self) -> &BoxWorld {
        &self.world
    }

    pub fn logic(&self) -> &ConcreteLogic {
        &self.logic
    }

    pub fn atom_labels(&self) -> &[JointOutcome] {
        &self.atom_labels
    }
}

/// The maps `u`, `v` and `Phi` as explicit tables of element indices.
///
/// `u_map[i]` is the index in the composite logic of `u` applied to element
/// `i` of the left logic; `phi_map[i * |L_V| + j]` is `Phi(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductWitness {
    pub u_map: Vec<EventId>,
    pub v_map: Vec<EventId>,
    pub phi_map: Vec<EventId>,
    pub right_len: usize,
}

impl ProductWitness {
    pub fn phi(&self, p: EventId, q: EventId) -> EventId {
        self.phi_map[p.0 * self.right_len + q.0]
    }
}

/// Tabulates `u`, `v` and `Phi(p, q) = u(p) & v(q)` over the component logics.
pub fn build_product_witness(
    composite: &TwoBoxLogic,
    left: &SingleBoxLogic,
    right: &SingleBoxLogic,
) -> Result<ProductWitness> {
    let world = composite.world();
    let logic = composite.logic();
    let locate = |set: Bits, what: &str| {
        logic.find(&set).ok_or_else(|| {
            Error::Invariant(format!(
                "{what} {} is not in the composite logic",
                set.to_hex()
            ))
        })
    };
    let u_sets = left
        .logic()
        .events()
        .iter()
        .map(|e| world.embed_left(left, &e.members))
        .collect::<Result<Vec<_>>>()?;
    let v_sets = right
        .logic()
        .events()
        .iter()
        .map(|e| world.embed_right(right, &e.members))
        .collect::<Result<Vec<_>>>()?;
    let mut phi_map = Vec::with_capacity(u_sets.len() * v_sets.len());
    for u in &u_sets {
        for v in &v_sets {
            phi_map.push(locate(u.intersection(v), "Phi image")?);
        }
    }
    Ok(ProductWitness {
        u_map: u_sets
            .into_iter()
            .map(|s| locate(s, "u image"))
            .collect::<Result<_>>()?,
        v_map: v_sets
            .into_iter()
            .map(|s| locate(s, "v image"))
            .collect::<Result<_>>()?,
        phi_map,
        right_len: right.logic().len(),
    })
}

/// Everything built for one box world.
#[derive(Clone, Debug)]
pub struct BuiltWorld {
    pub world: BoxWorld,
    pub left: SingleBoxLogic,
    pub right: SingleBoxLogic,
    pub composite: TwoBoxLogic,
    pub witness: ProductWitness,
}

impl BuiltWorld {
    pub fn build(world: BoxWorld, budget: usize) -> Result<Self> {
        let left = SingleBoxLogic::build(world.left(), budget)?;
        let right = SingleBoxLogic::build(world.right(), budget)?;
        let composite = TwoBoxLogic::build(&world, budget)?;
        let witness = build_product_witness(&composite, &left, &right)?;
        Ok(BuiltWorld {
            world,
            left,
            right,
            composite,
            witness,
        })
    }
}
