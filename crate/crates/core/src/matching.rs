//! Capacitated bipartite assignment (b-matching) by augmenting paths.
//!
//! Left vertices are assigned to at most one right vertex each; right vertex
//! `r` accepts at most `capacity` left vertices.

/// Assignment of left vertices to right vertices under a uniform capacity.
#[derive(Debug, Clone)]
pub struct BMatching<'a> {
    adj: &'a [Vec<usize>],
    capacity: usize,
    assign: Vec<Option<usize>>,
    members: Vec<Vec<usize>>,
    locked: Vec<bool>,
}

impl<'a> BMatching<'a> {
    /// `adj[l]` lists the right vertices allowed for left vertex `l`, in
    /// preference order.
    pub fn new(adj: &'a [Vec<usize>], right: usize, capacity: usize) -> Self {
        Self {
            adj,
            capacity,
            assign: vec![None; adj.len()],
            members: vec![Vec::new(); right],
            locked: vec![false; adj.len()],
        }
    }

    pub fn assignment(&self) -> &[Option<usize>] {
        &self.assign
    }

    pub fn size(&self) -> usize {
        self.assign.iter().flatten().count()
    }

    fn place(&mut self, left: usize, right: usize) {
        self.assign[left] = Some(right);
        self.members[right].push(left);
    }

    fn unplace(&mut self, left: usize) -> Option<usize> {
        let right = self.assign[left].take()?;
        let pos = self.members[right].iter().position(|&l| l == left).expect("member");
        self.members[right].swap_remove(pos);
        Some(right)
    }

    /// Tries to assign `left` somewhere, displacing unlocked vertices along
    /// an augmenting path. Only rights not yet in `seen` are explored.
    fn augment(&mut self, left: usize, seen: &mut [bool]) -> bool {
        for i in 0..self.adj[left].len() {
            let right = self.adj[left][i];
            if seen[right] {
                continue;
            }
            seen[right] = true;
            if self.members[right].len() < self.capacity || self.evict_from(right, seen) {
                self.place(left, right);
                return true;
            }
        }
        false
    }

    /// Moves one unlocked member of `right` elsewhere, freeing a slot.
    fn evict_from(&mut self, right: usize, seen: &mut [bool]) -> bool {
        for i in 0..self.members[right].len() {
            let other = self.members[right][i];
            if self.locked[other] {
                continue;
            }
            self.unplace(other);
            if self.augment(other, seen) {
                return true;
            }
            self.place(other, right);
            // `place` pushed to the back; keep the scan order stable.
            let last = self.members[right].len() - 1;
            self.members[right].swap(i, last);
        }
        false
    }

    /// Grows the assignment to maximum size.
    pub fn maximize(&mut self) -> usize {
        let right = self.members.len();
        for left in 0..self.adj.len() {
            if self.assign[left].is_none() {
                let mut seen = vec![false; right];
                self.augment(left, &mut seen);
            }
        }
        self.size()
    }

    /// Rewrites a complete assignment into the lexicographically least one
    /// (left ascending, each left taking its earliest feasible right in
    /// `adj` order).
    pub fn make_lexicographic(&mut self) {
        let right = self.members.len();
        for left in 0..self.adj.len() {
            for i in 0..self.adj[left].len() {
                let target = self.adj[left][i];
                if self.assign[left] == Some(target) {
                    break;
                }
                let old = self.unplace(left);
                let mut seen = vec![false; right];
                seen[target] = true;
                if self.members[target].len() < self.capacity || self.evict_from(target, &mut seen) {
                    self.place(left, target);
                    break;
                }
                if let Some(old) = old {
                    // Any eviction chain that failed left the state untouched.
                    self.place(left, old);
                }
            }
            self.locked[left] = true;
        }
    }
}
