//! Conflict-driven clause learning with two watched literals, first-UIP
//! learning, activity-based branching, phase saving and Luby restarts.

use std::time::Instant;

use crate::sat::Cnf;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Sat(Vec<bool>),
    Unsat,
    Timeout,
}

type Lit = usize;

fn lit_of(dimacs: i32) -> Lit {
    let v = dimacs.unsigned_abs() as usize - 1;
    2 * v + usize::from(dimacs < 0)
}

fn var(l: Lit) -> usize {
    l >> 1
}

fn neg(l: Lit) -> Lit {
    l ^ 1
}

/// The Luby sequence 1, 1, 2, 1, 1, 2, 4, ... indexed from 1.
fn luby(mut i: u64) -> u64 {
    loop {
        let mut k = 1;
        while (1u64 << k) - 1 < i {
            k += 1;
        }
        if (1u64 << k) - 1 == i {
            return 1 << (k - 1);
        }
        i -= (1u64 << (k - 1)) - 1;
    }
}

struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    value: Vec<Option<bool>>,
    level: Vec<usize>,
    reason: Vec<Option<usize>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    bump: f64,
    phase: Vec<bool>,
    seen: Vec<bool>,
}

impl Solver {
    fn lit_value(&self, l: Lit) -> Option<bool> {
        self.value[var(l)].map(|b| b != (l & 1 == 1))
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn enqueue(&mut self, l: Lit, reason: Option<usize>) {
        let v = var(l);
        self.value[v] = Some(l & 1 == 0);
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn attach(&mut self, ci: usize) {
        let c = &self.clauses[ci];
        self.watches[c[0]].push(ci);
        self.watches[c[1]].push(ci);
    }

    /// Returns the index of a conflicting clause, if any.
    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = neg(p);
            let mut ws = std::mem::take(&mut self.watches[false_lit]);
            let mut i = 0;
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                if self.clauses[ci][0] == false_lit {
                    self.clauses[ci].swap(0, 1);
                }
                let first = self.clauses[ci][0];
                if self.lit_value(first) == Some(true) {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..self.clauses[ci].len() {
                    let l = self.clauses[ci][k];
                    if self.lit_value(l) != Some(false) {
                        self.clauses[ci].swap(1, k);
                        self.watches[l].push(ci);
                        ws.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                i += 1;
                match self.lit_value(first) {
                    Some(false) => {
                        conflict = Some(ci);
                        break;
                    }
                    _ => self.enqueue(first, Some(ci)),
                }
            }
            self.watches[false_lit] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.bump;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.bump *= 1e-100;
        }
    }

    /// First-UIP analysis. Returns the learnt clause (asserting literal
    /// first) and the backjump level.
    fn analyze(&mut self, mut conflict: usize) -> (Vec<Lit>, usize) {
        let mut learnt = vec![0];
        let mut pending = 0;
        let mut idx = self.trail.len();
        let mut p: Option<Lit> = None;
        loop {
            let start = usize::from(p.is_some());
            for k in start..self.clauses[conflict].len() {
                let q = self.clauses[conflict][k];
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] == self.decision_level() {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break;
                }
            }
            let l = self.trail[idx];
            p = Some(l);
            self.seen[var(l)] = false;
            pending -= 1;
            if pending == 0 {
                break;
            }
            conflict = self.reason[var(l)].expect("implied literal has a reason");
            // the reason clause has the implied literal in position 0
            debug_assert_eq!(self.clauses[conflict][0], l);
        }
        learnt[0] = neg(p.unwrap());
        for &q in &learnt[1..] {
            self.seen[var(q)] = false;
        }
        let mut back = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for k in 2..learnt.len() {
                if self.level[var(learnt[k])] > self.level[var(learnt[best])] {
                    best = k;
                }
            }
            learnt.swap(1, best);
            back = self.level[var(learnt[1])];
        }
        (learnt, back)
    }

    fn backtrack(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let stop = self.trail_lim[level];
        for &l in &self.trail[stop..] {
            let v = var(l);
            self.phase[v] = self.value[v].unwrap();
            self.value[v] = None;
            self.reason[v] = None;
        }
        self.trail.truncate(stop);
        self.trail_lim.truncate(level);
        self.qhead = stop;
    }

    fn pick(&self) -> Option<Lit> {
        let mut best: Option<usize> = None;
        for v in 0..self.value.len() {
            if self.value[v].is_none() && best.is_none_or(|b| self.activity[v] > self.activity[b]) {
                best = Some(v);
            }
        }
        best.map(|v| 2 * v + usize::from(!self.phase[v]))
    }
}

/// Decides `cnf`. The deadline is checked between conflicts.
pub fn solve(cnf: &Cnf, deadline: Option<Instant>) -> Outcome {
    let n = cnf.num_vars as usize;
    let mut s = Solver {
        clauses: Vec::new(),
        watches: vec![Vec::new(); 2 * n],
        value: vec![None; n],
        level: vec![0; n],
        reason: vec![None; n],
        trail: Vec::new(),
        trail_lim: Vec::new(),
        qhead: 0,
        activity: vec![0.0; n],
        bump: 1.0,
        phase: vec![false; n],
        seen: vec![false; n],
    };
    for clause in &cnf.clauses {
        let mut lits: Vec<Lit> = clause.iter().map(|&l| lit_of(l)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == neg(w[1])) {
            continue;
        }
        match lits.len() {
            0 => return Outcome::Unsat,
            1 => match s.lit_value(lits[0]) {
                Some(false) => return Outcome::Unsat,
                Some(true) => {}
                None => s.enqueue(lits[0], None),
            },
            _ => {
                s.clauses.push(lits);
                s.attach(s.clauses.len() - 1);
            }
        }
    }
    if s.propagate().is_some() {
        return Outcome::Unsat;
    }
    let mut restarts = 1u64;
    let mut budget = 100 * luby(restarts);
    let mut conflicts = 0u64;
    loop {
        if let Some(conflict) = s.propagate() {
            if s.decision_level() == 0 {
                return Outcome::Unsat;
            }
            conflicts += 1;
            if conflicts.is_multiple_of(64) && deadline.is_some_and(|d| Instant::now() >= d) {
                return Outcome::Timeout;
            }
            let (learnt, back) = s.analyze(conflict);
            s.backtrack(back);
            if learnt.len() == 1 {
                s.enqueue(learnt[0], None);
            } else {
                let asserting = learnt[0];
                s.clauses.push(learnt);
                let ci = s.clauses.len() - 1;
                s.attach(ci);
                s.enqueue(asserting, Some(ci));
            }
            s.bump *= 1.0 / 0.95;
        } else {
            if conflicts >= budget {
                conflicts = 0;
                restarts += 1;
                budget = 100 * luby(restarts);
                s.backtrack(0);
                continue;
            }
            match s.pick() {
                None => {
                    return Outcome::Sat(s.value.iter().map(|v| v.unwrap()).collect());
                }
                Some(l) => {
                    s.trail_lim.push(s.trail.len());
                    s.enqueue(l, None);
                }
            }
        }
    }
}
