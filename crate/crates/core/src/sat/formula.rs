use std::collections::HashMap;

use super::Atom;

/// Handle to a node of a [`FormulaBuilder`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Formula(pub(crate) u32);

impl Formula {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    True,
    False,
    Atom(Atom),
    Not(Formula),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Iff(Formula, Formula),
}

/// Arena of hash-consed formula nodes. Structurally equal formulas built
/// through the same builder are the same [`Formula`].
#[derive(Debug, Clone)]
pub struct FormulaBuilder {
    nodes: Vec<Node>,
    table: HashMap<Node, Formula>,
}

impl Default for FormulaBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl FormulaBuilder {
    pub fn new() -> Self {
        let mut b = FormulaBuilder {
            nodes: Vec::new(),
            table: HashMap::new(),
        };
        b.intern(Node::True);
        b.intern(Node::False);
        b
    }

    fn intern(&mut self, node: Node) -> Formula {
        if let Some(&f) = self.table.get(&node) {
            return f;
        }
        let f = Formula(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.table.insert(node, f);
        f
    }

    pub fn node(&self, f: Formula) -> &Node {
        &self.nodes[f.index()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn top(&self) -> Formula {
        Formula(0)
    }

    pub fn bottom(&self) -> Formula {
        Formula(1)
    }

    pub fn constant(&self, value: bool) -> Formula {
        if value {
            self.top()
        } else {
            self.bottom()
        }
    }

    pub fn atom(&mut self, a: Atom) -> Formula {
        self.intern(Node::Atom(a))
    }

    pub fn not(&mut self, f: Formula) -> Formula {
        match self.node(f) {
            Node::True => self.bottom(),
            Node::False => self.top(),
            Node::Not(g) => *g,
            _ => self.intern(Node::Not(f)),
        }
    }

    pub fn and(&mut self, items: impl IntoIterator<Item = Formula>) -> Formula {
        self.junction(items, true)
    }

    pub fn or(&mut self, items: impl IntoIterator<Item = Formula>) -> Formula {
        self.junction(items, false)
    }

    fn junction(&mut self, items: impl IntoIterator<Item = Formula>, conj: bool) -> Formula {
        let (unit, zero) = (self.constant(conj), self.constant(!conj));
        let mut kids = Vec::new();
        for f in items {
            if f == zero {
                return zero;
            }
            if f == unit {
                continue;
            }
            // flatten nested junctions of the same kind
            match self.node(f) {
                Node::And(sub) if conj => kids.extend(sub.iter().copied()),
                Node::Or(sub) if !conj => kids.extend(sub.iter().copied()),
                _ => kids.push(f),
            }
        }
        kids.sort_unstable();
        kids.dedup();
        for &k in &kids {
            if let Node::Not(g) = self.node(k) {
                if kids.binary_search(g).is_ok() {
                    return zero;
                }
            }
        }
        match kids.len() {
            0 => unit,
            1 => kids[0],
            _ if conj => self.intern(Node::And(kids)),
            _ => self.intern(Node::Or(kids)),
        }
    }

    pub fn and2(&mut self, a: Formula, b: Formula) -> Formula {
        self.and([a, b])
    }

    pub fn or2(&mut self, a: Formula, b: Formula) -> Formula {
        self.or([a, b])
    }

    pub fn implies(&mut self, a: Formula, b: Formula) -> Formula {
        let na = self.not(a);
        self.or([na, b])
    }

    pub fn iff(&mut self, a: Formula, b: Formula) -> Formula {
        let (t, f) = (self.top(), self.bottom());
        if a == b {
            return t;
        }
        match (a, b) {
            _ if a == t => b,
            _ if b == t => a,
            _ if a == f => self.not(b),
            _ if b == f => self.not(a),
            _ => {
                let (x, y) = if a < b { (a, b) } else { (b, a) };
                self.intern(Node::Iff(x, y))
            }
        }
    }

    /// Evaluates `f` under an assignment of the atoms.
    pub fn eval(&self, f: Formula, assignment: &dyn Fn(Atom) -> bool) -> bool {
        let mut memo: HashMap<Formula, bool> = HashMap::new();
        self.eval_memo(f, assignment, &mut memo)
    }

    fn eval_memo(
        &self,
        f: Formula,
        assignment: &dyn Fn(Atom) -> bool,
        memo: &mut HashMap<Formula, bool>,
    ) -> bool {
        if let Some(&v) = memo.get(&f) {
            return v;
        }
        let v = match self.node(f) {
            Node::True => true,
            Node::False => false,
            Node::Atom(a) => assignment(*a),
            Node::Not(g) => !self.eval_memo(*g, assignment, memo),
            Node::And(kids) => kids.iter().all(|&k| self.eval_memo(k, assignment, memo)),
            Node::Or(kids) => kids.iter().any(|&k| self.eval_memo(k, assignment, memo)),
            Node::Iff(a, b) => {
                self.eval_memo(*a, assignment, memo) == self.eval_memo(*b, assignment, memo)
            }
        };
        memo.insert(f, v);
        v
    }

    /// Nodes reachable from `root`, children before parents.
    pub fn reachable(&self, root: Formula) -> Vec<Formula> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = Vec::new();
        let mut stack = vec![(root, false)];
        while let Some((f, expanded)) = stack.pop() {
            if expanded {
                order.push(f);
                continue;
            }
            if seen[f.index()] {
                continue;
            }
            seen[f.index()] = true;
            stack.push((f, true));
            match self.node(f) {
                Node::Not(g) => stack.push((*g, false)),
                Node::And(kids) | Node::Or(kids) => {
                    stack.extend(kids.iter().map(|&k| (k, false)));
                }
                Node::Iff(a, b) => {
                    stack.push((*a, false));
                    stack.push((*b, false));
                }
                _ => {}
            }
        }
        order
    }
}
