//! Planar exchange moves on one-generator slices.
//!
//! A slice sequence is a list of [`Cell`]s; cell `k` rewrites the interval
//! `[offset, offset + n_in)` of boundary `k` into `n_out` wires. Two adjacent
//! cells may swap when the second one's input interval lies entirely to the
//! left or entirely to the right of the first one's output interval. When both
//! intervals are empty and sit at the same position the swap has two readings,
//! and both are produced. Cells flagged `sequential` never swap with each other.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Cell {
    pub offset: usize,
    pub label: u32,
    pub n_in: usize,
    pub n_out: usize,
    pub sequential: bool,
}

/// Result of a bounded search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfsOutcome {
    Equal,
    Unequal,
    /// The state budget ran out before the search closed.
    Inconclusive,
}

impl BfsOutcome {
    pub fn is_equal(self) -> bool {
        self == BfsOutcome::Equal
    }
}

/// All ways to exchange `a` followed by `b` into `b'` followed by `a'`.
pub(crate) fn exchanges(a: &Cell, b: &Cell) -> Vec<(Cell, Cell)> {
    let mut out = Vec::with_capacity(2);
    if a.sequential && b.sequential {
        return out;
    }
    let (p, q) = (a.offset, b.offset);
    if q + b.n_in <= p {
        let b2 = Cell { offset: q, ..*b };
        let a2 = Cell { offset: p - b.n_in + b.n_out, ..*a };
        out.push((b2, a2));
    }
    if p + a.n_out <= q {
        let b2 = Cell { offset: q - a.n_out + a.n_in, ..*b };
        let a2 = Cell { offset: p, ..*a };
        if !out.contains(&(b2, a2)) {
            out.push((b2, a2));
        }
    }
    out
}

/// Every sequence one exchange move away from `cells`.
pub(crate) fn neighbours(cells: &[Cell]) -> Vec<Vec<Cell>> {
    let mut out = Vec::new();
    for k in 0..cells.len().saturating_sub(1) {
        for (b, a) in exchanges(&cells[k], &cells[k + 1]) {
            let mut next = cells.to_vec();
            next[k] = b;
            next[k + 1] = a;
            out.push(next);
        }
    }
    out
}

/// Breadth-first closure of `start` under exchange moves, looking for `target`.
pub(crate) fn bfs_reaches(start: &[Cell], target: &[Cell], max_states: usize) -> BfsOutcome {
    if start == target {
        return BfsOutcome::Equal;
    }
    if start.len() != target.len() {
        return BfsOutcome::Unequal;
    }
    let mut seen: HashSet<Vec<Cell>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.to_vec());
    queue.push_back(start.to_vec());
    while let Some(state) = queue.pop_front() {
        for next in neighbours(&state) {
            if next == target {
                return BfsOutcome::Equal;
            }
            if seen.contains(&next) {
                continue;
            }
            if seen.len() >= max_states {
                return BfsOutcome::Inconclusive;
            }
            seen.insert(next.clone());
            queue.push_back(next);
        }
    }
    BfsOutcome::Unequal
}

/// Every sequence in the exchange class of `cells`.
pub(crate) fn class_of(cells: &[Cell]) -> Vec<Vec<Cell>> {
    let mut seen: HashSet<Vec<Cell>> = HashSet::new();
    let mut order = vec![cells.to_vec()];
    seen.insert(cells.to_vec());
    let mut k = 0;
    while k < order.len() {
        for next in neighbours(&order[k]) {
            if seen.insert(next.clone()) {
                order.push(next);
            }
        }
        k += 1;
    }
    order
}

fn sort_key(cells: &[Cell]) -> Vec<(usize, u32)> {
    cells.iter().map(|c| (c.offset, c.label)).collect()
}

/// True when some cell with no outputs can meet a different cell with no
/// inputs. Only then can a swap have two readings.
fn has_two_readings(cells: &[Cell]) -> bool {
    cells.iter().enumerate().any(|(i, a)| {
        a.n_out == 0 && cells.iter().enumerate().any(|(j, b)| i != j && b.n_in == 0 && !(a.sequential && b.sequential))
    })
}

/// Canonical representative of the exchange class of `cells`: the
/// lexicographically least sequence in the class, comparing cells by
/// `(offset, label)`.
///
/// Without two-reading swaps the class behaves like a trace monoid, and the
/// least sequence is built greedily: each step brings every movable cell to
/// the front and keeps the least. Otherwise a cell may only become movable
/// after a detour through the other reading, so the whole class is searched.
pub(crate) fn normalize(cells: &[Cell]) -> Vec<Cell> {
    if has_two_readings(cells) {
        return class_of(cells)
            .into_iter()
            .min_by(|a, b| sort_key(a).cmp(&sort_key(b)))
            .unwrap_or_default();
    }
    let mut out: Vec<Cell> = Vec::with_capacity(cells.len());
    let mut states: Vec<Vec<Cell>> = vec![cells.to_vec()];
    while !states[0].is_empty() {
        let mut best: Option<(usize, u32)> = None;
        let mut picks: Vec<(usize, usize)> = Vec::new();
        for (s, rest) in states.iter().enumerate() {
            for j in 0..rest.len() {
                let Some(moved) = front_of(rest, j) else { continue };
                let key = (moved.offset, moved.label);
                match best.map_or(Ordering::Less, |b| key.cmp(&b)) {
                    Ordering::Less => {
                        best = Some(key);
                        picks.clear();
                        picks.push((s, j));
                    }
                    Ordering::Equal => picks.push((s, j)),
                    Ordering::Greater => {}
                }
            }
        }
        let mut next: Vec<Vec<Cell>> = Vec::with_capacity(picks.len());
        let mut head = None;
        for (s, j) in picks {
            let (moved, remaining) = move_to_front(&states[s], j);
            head = Some(moved);
            if !next.contains(&remaining) {
                next.push(remaining);
            }
        }
        out.push(head.expect("a non-empty sequence has a movable first cell"));
        states = next;
    }
    out
}

/// The single exchange of `a` followed by `b`, for lists without two-reading swaps.
fn exchange(a: &Cell, b: &Cell) -> Option<(Cell, Cell)> {
    if a.sequential && b.sequential {
        return None;
    }
    let (p, q) = (a.offset, b.offset);
    if q + b.n_in <= p {
        debug_assert!(p + a.n_out > q || a.n_out + b.n_in > 0);
        return Some((Cell { offset: q, ..*b }, Cell { offset: p - b.n_in + b.n_out, ..*a }));
    }
    if p + a.n_out <= q {
        return Some((Cell { offset: q - a.n_out + a.n_in, ..*b }, Cell { offset: p, ..*a }));
    }
    None
}

/// What `cells[j]` becomes at the front, if nothing blocks it.
fn front_of(cells: &[Cell], j: usize) -> Option<Cell> {
    let mut moving = cells[j];
    for a in cells[..j].iter().rev() {
        moving = exchange(a, &moving)?.0;
    }
    Some(moving)
}

fn move_to_front(cells: &[Cell], j: usize) -> (Cell, Vec<Cell>) {
    let mut rest = cells.to_vec();
    let mut moving = cells[j];
    for i in (0..j).rev() {
        let (b, a) = exchange(&cells[i], &moving).expect("checked by front_of");
        rest[i + 1] = a;
        moving = b;
    }
    rest.remove(0);
    (moving, rest)
}

/// Decides whether `a` and `b` lie in the same exchange class.
///
/// Without two-reading swaps this compares greedy normal forms. Otherwise it
/// grows the classes of both ends one layer at a time, always expanding the
/// smaller frontier, until they meet or one side is exhausted.
pub(crate) fn equivalent(a: &[Cell], b: &[Cell]) -> bool {
    if a == b {
        return true;
    }
    if a.len() != b.len() {
        return false;
    }
    if !has_two_readings(a) {
        return normalize(a) == normalize(b);
    }
    let mut seen = [HashSet::from([a.to_vec()]), HashSet::from([b.to_vec()])];
    let mut frontier = [vec![a.to_vec()], vec![b.to_vec()]];
    loop {
        let side = usize::from(frontier[1].len() < frontier[0].len());
        let mut next = Vec::new();
        for state in &frontier[side] {
            for n in neighbours(state) {
                if seen[1 - side].contains(&n) {
                    return true;
                }
                if seen[side].insert(n.clone()) {
                    next.push(n);
                }
            }
        }
        if next.is_empty() {
            return false;
        }
        frontier[side] = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(offset: usize, label: u32, n_in: usize, n_out: usize) -> Cell {
        Cell { offset, label, n_in, n_out, sequential: false }
    }

    #[test]
    fn disjoint_cells_swap_with_offset_shift() {
        // producer at 0 followed by a producer inserted left of it
        let a = cell(0, 1, 0, 1);
        let b = cell(0, 0, 0, 1);
        let swaps = exchanges(&a, &b);
        assert_eq!(swaps, vec![(cell(0, 0, 0, 1), cell(1, 1, 0, 1))]);
    }

    #[test]
    fn dependent_cells_do_not_swap() {
        let a = cell(0, 0, 0, 1);
        let b = cell(0, 1, 1, 1);
        assert!(exchanges(&a, &b).is_empty());
    }

    #[test]
    fn empty_intervals_at_same_point_give_two_readings() {
        let consumer = cell(0, 0, 1, 0);
        let producer = cell(0, 1, 0, 1);
        let swaps = exchanges(&consumer, &producer);
        assert_eq!(swaps.len(), 2);
        assert!(swaps.contains(&(cell(0, 1, 0, 1), cell(1, 0, 1, 0))));
        assert!(swaps.contains(&(cell(1, 1, 0, 1), cell(0, 0, 1, 0))));
    }

    #[test]
    fn sequential_cells_never_swap() {
        let a = Cell { sequential: true, ..cell(0, 0, 1, 1) };
        let b = Cell { sequential: true, ..cell(3, 1, 1, 1) };
        assert!(exchanges(&a, &b).is_empty());
    }

    #[test]
    fn normalize_is_idempotent_on_small_example() {
        let seq = vec![cell(0, 1, 0, 1), cell(0, 0, 0, 1), cell(1, 2, 2, 1)];
        let n = normalize(&seq);
        assert_eq!(normalize(&n), n);
        assert_eq!(bfs_reaches(&seq, &n, 1000), BfsOutcome::Equal);
    }

    #[test]
    fn equivalence_agrees_with_the_full_class() {
        let seq = vec![cell(0, 0, 1, 0), cell(0, 1, 0, 1), cell(0, 2, 0, 1), cell(1, 3, 2, 0)];
        let class = class_of(&seq);
        for other in &class {
            assert!(equivalent(&seq, other));
        }
        let mut moved = seq.clone();
        moved[3].offset = 0;
        assert!(!class.contains(&moved));
        assert!(!equivalent(&seq, &moved));
    }
}
