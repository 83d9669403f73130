//! Interned atoms with precomputed integer rows, for algorithms that test
//! many small conjunctions over the same atoms.

use std::collections::HashMap;

use super::fast::{prepare, satisfiable_prepared, Prepared};
use super::{atoms_sat, negate_atom};
use crate::syntax::{Atom, Var};

/// Atoms come in complementary pairs: the negation of id `k` is `k ^ 1`.
pub(crate) struct AtomTable {
    vars: Vec<Var>,
    atoms: Vec<Atom>,
    rows: Vec<Option<Prepared>>,
    ids: HashMap<Atom, usize>,
}

impl AtomTable {
    pub(crate) fn new(vars: impl IntoIterator<Item = Var>) -> Self {
        let mut vars: Vec<Var> = vars.into_iter().collect();
        vars.sort();
        vars.dedup();
        AtomTable { vars, atoms: Vec::new(), rows: Vec::new(), ids: HashMap::new() }
    }

    pub(crate) fn id(&mut self, a: &Atom) -> usize {
        if let Some(&k) = self.ids.get(a) {
            return k;
        }
        for x in a.vars() {
            if let Err(pos) = self.vars.binary_search(x) {
                self.vars.insert(pos, x.clone());
                // the column layout changed
                self.rows.iter_mut().for_each(|r| *r = None);
            }
        }
        let k = self.atoms.len();
        for b in [a.clone(), negate_atom(a)] {
            self.ids.insert(b.clone(), self.atoms.len());
            self.atoms.push(b);
            self.rows.push(None);
        }
        self.prepare_all();
        k
    }

    fn prepare_all(&mut self) {
        let index: Vec<&Var> = self.vars.iter().collect();
        for (a, r) in self.atoms.iter().zip(self.rows.iter_mut()) {
            if r.is_none() {
                *r = prepare(a, &index).ok();
            }
        }
    }

    pub(crate) fn atom(&self, k: usize) -> &Atom {
        &self.atoms[k]
    }

    pub(crate) fn sat(&self, ids: &[usize]) -> bool {
        if ids.iter().all(|&k| self.rows[k].is_some()) {
            if let Ok(v) = satisfiable_prepared(ids.iter().map(|&k| self.rows[k].as_ref().unwrap())) {
                return v;
            }
        }
        let atoms: Vec<Atom> = ids.iter().map(|&k| self.atoms[k].clone()).collect();
        atoms_sat(&atoms)
    }
}
