//! Exhaustive search over finite maps `[0, len) -> [0, range)`.
//!
//! Candidates are visited in lexicographic order of their value tables
//! (position 0 most significant). The search backtracks as soon as the
//! caller's consistency check rejects a prefix, so the first map returned
//! is exactly the lexicographically first map accepted by a naive
//! enumeration of all `range^len` candidates, provided the check only
//! rejects prefixes that no completion can satisfy.

/// Default cap on the number of candidate maps an exhaustive search may cover.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Vec<usize>),
    NotFound,
    /// The candidate space `range^len` is larger than the budget.
    OverBudget { candidates: Option<u64>, budget: u64 },
}

impl SearchOutcome {
    pub fn found(self) -> Option<Vec<usize>> {
        match self {
            SearchOutcome::Found(v) => Some(v),
            _ => None,
        }
    }
}

/// Number of maps `[0, len) -> [0, range)`, or `None` on overflow.
pub fn candidate_count(len: usize, range: usize) -> Option<u64> {
    let len = u32::try_from(len).ok()?;
    (range as u64).checked_pow(len)
}

/// Backtracking search for the first map whose every prefix passes `consistent`.
///
/// `consistent` receives the assigned prefix and must only reject it when the
/// last assigned position conflicts with constraints among assigned positions.
pub fn first_map<F>(len: usize, range: usize, budget: u64, mut consistent: F) -> SearchOutcome
where
    F: FnMut(&[usize]) -> bool,
{
    match candidate_count(len, range) {
        Some(n) if n <= budget => {}
        candidates => return SearchOutcome::OverBudget { candidates, budget },
    }
    if len == 0 {
        return SearchOutcome::Found(Vec::new());
    }
    if range == 0 {
        return SearchOutcome::NotFound;
    }
    let mut assigned: Vec<usize> = Vec::with_capacity(len);
    assigned.push(0);
    loop {
        if consistent(&assigned) {
            if assigned.len() == len {
                return SearchOutcome::Found(assigned);
            }
            assigned.push(0);
            continue;
        }
        // advance to the next candidate, popping exhausted positions
        loop {
            let last = assigned.last_mut().expect("nonempty while searching");
            *last += 1;
            if *last < range {
                break;
            }
            assigned.pop();
            if assigned.is_empty() {
                return SearchOutcome::NotFound;
            }
        }
    }
}

/// Every map whose prefixes all pass `consistent`, in lexicographic order.
pub fn all_maps_where<F>(len: usize, range: usize, budget: u64, mut consistent: F) -> Result<Vec<Vec<usize>>, SearchOutcome>
where
    F: FnMut(&[usize]) -> bool,
{
    match candidate_count(len, range) {
        Some(n) if n <= budget => {}
        candidates => return Err(SearchOutcome::OverBudget { candidates, budget }),
    }
    let mut found = Vec::new();
    if len == 0 {
        found.push(Vec::new());
        return Ok(found);
    }
    if range == 0 {
        return Ok(found);
    }
    let mut assigned = vec![0usize];
    loop {
        let ok = consistent(&assigned);
        if ok && assigned.len() < len {
            assigned.push(0);
            continue;
        }
        if ok {
            found.push(assigned.clone());
        }
        loop {
            let last = assigned.last_mut().expect("nonempty while searching");
            *last += 1;
            if *last < range {
                break;
            }
            assigned.pop();
            if assigned.is_empty() {
                return Ok(found);
            }
        }
    }
}

/// Iterator over every map `[0, len) -> [0, range)` in lexicographic order.
#[derive(Debug, Clone)]
pub struct AllMaps {
    len: usize,
    range: usize,
    next: Option<Vec<usize>>,
}

impl AllMaps {
    pub fn new(len: usize, range: usize) -> Self {
        let next = if len > 0 && range == 0 {
            None
        } else {
            Some(vec![0; len])
        };
        AllMaps { len, range, next }
    }
}

impl Iterator for AllMaps {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut pos = self.len;
        while pos > 0 {
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < self.range {
                self.next = Some(succ);
                return Some(current);
            }
            succ[pos] = 0;
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_all_maps_in_order() {
        let maps: Vec<_> = AllMaps::new(2, 3).collect();
        assert_eq!(maps.len(), 9);
        assert_eq!(maps[0], vec![0, 0]);
        assert_eq!(maps[1], vec![0, 1]);
        assert_eq!(maps[8], vec![2, 2]);
        assert_eq!(AllMaps::new(0, 0).count(), 1);
        assert_eq!(AllMaps::new(2, 0).count(), 0);
    }

    #[test]
    fn backtracking_matches_naive_first_witness() {
        // predicate: strictly increasing values
        let accept = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        for len in 0..4 {
            for range in 0..5 {
                let naive = AllMaps::new(len, range).find(|m| accept(m));
                let pruned = first_map(len, range, DEFAULT_BUDGET, |p| accept(p)).found();
                assert_eq!(naive, pruned, "len {len} range {range}");
            }
        }
    }

    #[test]
    fn collects_every_solution() {
        let accept = |v: &[usize]| v.windows(2).all(|w| w[0] <= w[1]);
        for len in 0..4 {
            for range in 0..4 {
                let naive: Vec<_> = AllMaps::new(len, range).filter(|m| accept(m)).collect();
                let pruned = all_maps_where(len, range, DEFAULT_BUDGET, |p| accept(p)).unwrap();
                assert_eq!(naive, pruned);
            }
        }
    }

    #[test]
    fn over_budget_is_reported() {
        let out = first_map(10, 10, 1000, |_| true);
        assert_eq!(
            out,
            SearchOutcome::OverBudget {
                candidates: Some(10_000_000_000),
                budget: 1000
            }
        );
        assert!(matches!(
            first_map(100, 100, 10, |_| true),
            SearchOutcome::OverBudget { candidates: None, .. }
        ));
    }
}
