//! Finite concrete quantum logics: families of subsets of a ground set that
//! contain the empty set and are closed under complement and disjoint union.

mod axioms;
mod compat;
mod cover;
mod export;
mod ground;
mod order;
mod pasting;

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::bits::Bits;
use crate::error::{Error, Result};

pub use axioms::verify_logic_axioms;
pub use compat::{pairwise_compatible, CompatibilityWitness};
pub use export::LogicExport;
pub use ground::{GroundSet, Point, Shape};
pub use pasting::{are_isomorphic, zero_one_pasting, Orthoposet};

/// Default cap on the number of elements a closure may produce.
pub const DEFAULT_BUDGET: usize = 1 << 20;

/// Index of an element of a logic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct EventId(pub usize);

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// How an element entered the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    Empty,
    Full,
    /// The i-th generator passed to [`ConcreteLogic::generate`].
    Generator(usize),
    ComplementOf(EventId),
    DisjointUnionOf(EventId, EventId),
    /// Supplied directly as part of a hand-built family.
    Given,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub members: Bits,
    pub certificate: Certificate,
}

/// A finite family of subsets of a ground set, ordered by inclusion with set
/// complement as orthocomplement.
///
/// Families returned by [`ConcreteLogic::generate`] satisfy C1-C3 by
/// construction. [`ConcreteLogic::from_family_unchecked`] admits arbitrary
/// families so that [`verify_logic_axioms`] can report on them.
pub struct ConcreteLogic {
    ground: GroundSet,
    events: Vec<Event>,
    index: HashMap<Bits, EventId>,
    atoms: Vec<EventId>,
    covers: OnceLock<Vec<Option<Vec<usize>>>>,
}

impl fmt::Debug for ConcreteLogic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConcreteLogic")
            .field("ground", &self.ground)
            .field("elements", &self.events.len())
            .field("atoms", &self.atoms.len())
            .finish()
    }
}

impl Clone for ConcreteLogic {
    fn clone(&self) -> Self {
        ConcreteLogic::assemble(self.ground.clone(), self.events.clone())
    }
}

impl ConcreteLogic {
    /// Smallest family over `ground` that contains `generators`, the empty
    /// set and the ground set, and is closed under complement and binary
    /// disjoint union.
    pub fn generate(ground: GroundSet, generators: &[Bits], budget: usize) -> Result<Self> {
        let width = ground.len();
        if let Some(i) = generators.iter().position(|g| g.width() != width) {
            return Err(Error::Input(format!(
                "generator {i} has width {} but the ground set has {width} points",
                generators[i].width()
            )));
        }

        let mut events: Vec<Event> = Vec::new();
        let mut index: HashMap<Bits, EventId> = HashMap::new();
        let mut insert = |events: &mut Vec<Event>, members: Bits, certificate| -> Result<()> {
            if index.contains_key(&members) {
                return Ok(());
            }
            if events.len() >= budget {
                return Err(Error::Budget(format!(
                    "closure over {width} points exceeds {budget} elements"
                )));
            }
            index.insert(members.clone(), EventId(events.len()));
            events.push(Event {
                members,
                certificate,
            });
            Ok(())
        };

        insert(&mut events, ground.empty_event(), Certificate::Empty)?;
        insert(&mut events, ground.full_event(), Certificate::Full)?;
        for (i, g) in generators.iter().enumerate() {
            insert(&mut events, g.clone(), Certificate::Generator(i))?;
        }

        // Semi-naive fixpoint: when element x is processed it is combined with
        // every element that precedes it, so each unordered pair is seen once.
        let mut next = 0;
        while next < events.len() {
            let x = next;
            next += 1;
            let complement = events[x].members.complement();
            insert(
                &mut events,
                complement,
                Certificate::ComplementOf(EventId(x)),
            )?;
            if events[x].members.is_empty() {
                continue;
            }
            for y in 1..=x {
                if events[y].members.is_empty()
                    || !events[x].members.is_disjoint(&events[y].members)
                {
                    continue;
                }
                let union = events[x].members.union(&events[y].members);
                insert(
                    &mut events,
                    union,
                    Certificate::DisjointUnionOf(EventId(y), EventId(x)),
                )?;
            }
        }

        Ok(Self::canonicalize(ground, events))
    }

    /// Wraps a hand-built family without closing it. Duplicates are removed.
    pub fn from_family_unchecked(ground: GroundSet, sets: Vec<Bits>) -> Result<Self> {
        if let Some(s) = sets.iter().find(|s| s.width() != ground.len()) {
            return Err(Error::Input(format!(
                "set of width {} does not fit a ground set of {} points",
                s.width(),
                ground.len()
            )));
        }
        let events = sets
            .into_iter()
            .map(|members| Event {
                members,
                certificate: Certificate::Given,
            })
            .collect();
        Ok(Self::canonicalize(ground, events))
    }

    /// Sorts elements canonically, drops duplicates and remaps certificates.
    fn canonicalize(ground: GroundSet, events: Vec<Event>) -> Self {
        let mut order: Vec<usize> = (0..events.len()).collect();
        order.sort_by(|&a, &b| events[a].members.cmp(&events[b].members));
        order.dedup_by(|a, b| events[*a].members == events[*b].members);
        let mut remap = vec![usize::MAX; events.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let fix = |c: Certificate| match c {
            Certificate::ComplementOf(p) => Certificate::ComplementOf(EventId(remap[p.0])),
            Certificate::DisjointUnionOf(p, q) => {
                let (p, q) = (remap[p.0], remap[q.0]);
                Certificate::DisjointUnionOf(EventId(p.min(q)), EventId(p.max(q)))
            }
            other => other,
        };
        let sorted = order
            .iter()
            .map(|&old| Event {
                members: events[old].members.clone(),
                certificate: fix(events[old].certificate),
            })
            .collect();
        Self::assemble(ground, sorted)
    }

    fn assemble(ground: GroundSet, events: Vec<Event>) -> Self {
        let index = events
            .iter()
            .enumerate()
            .map(|(i, e)| (e.members.clone(), EventId(i)))
            .collect();
        // Events are sorted by cardinality, so every proper nonempty subset of
        // an element is visited before it; an element is an atom iff no atom
        // found so far lies strictly below it.
        let mut atoms: Vec<EventId> = Vec::new();
        for (i, e) in events.iter().enumerate() {
            if e.members.is_empty() {
                continue;
            }
            let has_smaller = atoms.iter().any(|a| {
                events[a.0].members != e.members && events[a.0].members.is_subset(&e.members)
            });
            if !has_smaller {
                atoms.push(EventId(i));
            }
        }
        ConcreteLogic {
            ground,
            events,
            index,
            atoms,
            covers: OnceLock::new(),
        }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn ids(&self) -> impl Iterator<Item = EventId> {
        (0..self.events.len()).map(EventId)
    }

    pub fn event(&self, id: EventId) -> &Event {
        &self.events[id.0]
    }

    pub fn members(&self, id: EventId) -> &Bits {
        &self.events[id.0].members
    }

    pub fn find(&self, members: &Bits) -> Option<EventId> {
        self.index.get(members).copied()
    }

    pub fn contains(&self, members: &Bits) -> bool {
        self.index.contains_key(members)
    }

    /// Like [`find`](Self::find) but reports non-members as an error.
    pub fn require(&self, members: &Bits) -> Result<EventId> {
        if members.width() != self.ground.len() {
            return Err(Error::Input(format!(
                "event of width {} does not fit a ground set of {} points",
                members.width(),
                self.ground.len()
            )));
        }
        self.find(members)
            .ok_or_else(|| Error::NotAMember(members.to_hex()))
    }

    pub fn bottom(&self) -> Option<EventId> {
        self.find(&self.ground.empty_event())
    }

    pub fn top(&self) -> Option<EventId> {
        self.find(&self.ground.full_event())
    }

    pub fn leq(&self, p: &Bits, q: &Bits) -> Result<bool> {
        self.require(p)?;
        self.require(q)?;
        Ok(p.is_subset(q))
    }

    pub fn orthocomplement(&self, p: &Bits) -> Result<&Event> {
        self.require(p)?;
        let c = p.complement();
        let id = self.require(&c)?;
        Ok(self.event(id))
    }

    pub fn complement_id(&self, p: EventId) -> Option<EventId> {
        self.find(&self.members(p).complement())
    }

    /// Union of pairwise disjoint members. The empty list yields the empty set.
    pub fn join_disjoint(&self, ps: &[&Bits]) -> Result<&Event> {
        let mut acc = self.ground.empty_event();
        for (i, p) in ps.iter().enumerate() {
            self.require(p)?;
            if !acc.is_disjoint(p) {
                return Err(Error::Precondition(format!(
                    "element {i} meets an earlier element of the family"
                )));
            }
            acc.union_with(p);
        }
        let id = self.require(&acc)?;
        Ok(self.event(id))
    }

    pub fn atoms(&self) -> &[EventId] {
        &self.atoms
    }

    /// Atoms lying below `p`.
    pub fn atoms_below(&self, p: &Bits) -> impl Iterator<Item = EventId> + '_ {
        let p = p.clone();
        self.atoms
            .iter()
            .copied()
            .filter(move |a| self.members(*a).is_subset(&p))
    }

    pub fn is_atomistic(&self) -> bool {
        self.events.iter().all(|e| {
            let mut acc = self.ground.empty_event();
            for a in self.atoms_below(&e.members) {
                acc.union_with(self.members(a));
            }
            acc == e.members
        })
    }

    /// Position of `id` in [`atoms`](Self::atoms).
    pub fn atom_position(&self, id: EventId) -> Option<usize> {
        self.atoms.binary_search(&id).ok()
    }

    /// The member sets, in canonical order.
    pub fn sets(&self) -> Vec<Bits> {
        self.events.iter().map(|e| e.members.clone()).collect()
    }
}
