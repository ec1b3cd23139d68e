//! Local structure of the first column pair: every way its six vertices can
//! be wired by red edges, traced against each black pattern.
//!
//! A vertex whose red edge leaves the block is a stub. Collapsing the block
//! turns every black/red path between two stubs into a single red edge of
//! the smaller graph, and every closed cycle inside the block into a loop.
//! Which rows those new edges join depends on where the stubs' red edges land,
//! so each (wiring, black pattern, landing rows) triple is one move.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::edge::EdgeVector;

/// Block vertices in the order O1, O2, P1, P2, Q1, Q2.
const VERTICES: usize = 6;

/// Black edges inside the block for each of the four column-pair patterns.
pub const BLACK_TYPES: [[(usize, usize); 3]; 4] = [
    [(0, 1), (2, 4), (3, 5)],
    [(0, 5), (2, 4), (1, 3)],
    [(1, 4), (2, 0), (3, 5)],
    [(0, 2), (1, 3), (4, 5)],
];

/// Row of a block vertex, 0-based (O, P, Q).
pub const fn row_of(v: usize) -> usize {
    v / 2
}

/// Index of an unordered row pair: 0..3 same-row (11, 22, 33), 3..6 cross
/// (12, 13, 23).
pub const fn pair_index(r: usize, s: usize) -> usize {
    let (r, s) = if r <= s { (r, s) } else { (s, r) };
    match (r, s) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (0, 1) => 3,
        (0, 2) => 4,
        _ => 5,
    }
}

/// Families of block wirings, grouped by stub rows and internal red-edge rows.
/// A trailing `s` marks the image of a family under swapping rows 1 and 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    C1,
    C2,
    C2s,
    C3,
    C4,
    C5,
    C5s,
    C6,
    C6s,
    C7,
    C8,
    C9,
    C9s,
    C10,
    C10s,
    C11,
    C12,
    C13,
    C13s,
    C14,
    C15,
    C15s,
    C16,
    C17,
}

/// Which contribution group a case belongs to, by number of stubs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseGroup {
    /// No stubs: the whole block closes into loops.
    Closed,
    /// Two stubs, one path.
    OnePath,
    /// Four stubs, two paths.
    TwoPaths,
    /// Six stubs, three paths.
    ThreePaths,
}

impl CaseId {
    pub const ALL: [CaseId; 24] = [
        CaseId::C1,
        CaseId::C2,
        CaseId::C2s,
        CaseId::C3,
        CaseId::C4,
        CaseId::C5,
        CaseId::C5s,
        CaseId::C6,
        CaseId::C6s,
        CaseId::C7,
        CaseId::C8,
        CaseId::C9,
        CaseId::C9s,
        CaseId::C10,
        CaseId::C10s,
        CaseId::C11,
        CaseId::C12,
        CaseId::C13,
        CaseId::C13s,
        CaseId::C14,
        CaseId::C15,
        CaseId::C15s,
        CaseId::C16,
        CaseId::C17,
    ];

    pub fn label(self) -> &'static str {
        use CaseId::*;
        match self {
            C1 => "1",
            C2 => "2",
            C2s => "2s",
            C3 => "3",
            C4 => "4",
            C5 => "5",
            C5s => "5s",
            C6 => "6",
            C6s => "6s",
            C7 => "7",
            C8 => "8",
            C9 => "9",
            C9s => "9s",
            C10 => "10",
            C10s => "10s",
            C11 => "11",
            C12 => "12",
            C13 => "13",
            C13s => "13s",
            C14 => "14",
            C15 => "15",
            C15s => "15s",
            C16 => "16",
            C17 => "17",
        }
    }

    pub fn group(self) -> CaseGroup {
        use CaseId::*;
        match self {
            C1 | C2 | C2s | C3 | C4 => CaseGroup::Closed,
            C13 | C13s | C14 | C15 | C15s | C16 => CaseGroup::TwoPaths,
            C17 => CaseGroup::ThreePaths,
            _ => CaseGroup::OnePath,
        }
    }

    /// The case obtained by relabeling rows 1 and 3.
    pub fn mirror(self) -> CaseId {
        use CaseId::*;
        match self {
            C2 => C2s,
            C2s => C2,
            C5 => C5s,
            C5s => C5,
            C6 => C6s,
            C6s => C6,
            C9 => C9s,
            C9s => C9,
            C10 => C10s,
            C10s => C10,
            C13 => C13s,
            C13s => C13,
            C15 => C15s,
            C15s => C15,
            other => other,
        }
    }

    /// Classifies a wiring from its stub rows and internal red-edge row pairs
    /// (0-based rows).
    fn classify(stubs: &[usize], edges: &[(usize, usize)]) -> CaseId {
        use CaseId::*;
        let mut s: Vec<usize> = stubs.iter().map(|r| r + 1).collect();
        s.sort_unstable();
        let mut e: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(a, b)| (a.min(b) + 1, a.max(b) + 1))
            .collect();
        e.sort_unstable();
        match (s.as_slice(), e.as_slice()) {
            ([], [(1, 1), (2, 2), (3, 3)]) => C1,
            ([], [(1, 2), (1, 2), (3, 3)]) => C2,
            ([], [(1, 1), (2, 3), (2, 3)]) => C2s,
            ([], [(1, 3), (1, 3), (2, 2)]) => C3,
            ([], [(1, 2), (1, 3), (2, 3)]) => C4,
            ([1, 1], [(2, 2), (3, 3)]) => C5,
            ([1, 1], [(2, 3), (2, 3)]) => C6,
            ([3, 3], [(1, 1), (2, 2)]) => C5s,
            ([3, 3], [(1, 2), (1, 2)]) => C6s,
            ([2, 2], [(1, 1), (3, 3)]) => C7,
            ([2, 2], [(1, 3), (1, 3)]) => C8,
            ([1, 2], [(1, 2), (3, 3)]) => C9,
            ([1, 2], [(1, 3), (2, 3)]) => C10,
            ([2, 3], [(1, 1), (2, 3)]) => C9s,
            ([2, 3], [(1, 2), (1, 3)]) => C10s,
            ([1, 3], [(1, 3), (2, 2)]) => C11,
            ([1, 3], [(1, 2), (2, 3)]) => C12,
            (_, [(3, 3)]) => C13,
            (_, [(1, 1)]) => C13s,
            (_, [(2, 2)]) => C14,
            (_, [(2, 3)]) => C15,
            (_, [(1, 2)]) => C15s,
            (_, [(1, 3)]) => C16,
            (_, []) => C17,
            _ => unreachable!("impossible block wiring: stubs {s:?}, edges {e:?}"),
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A red wiring of the block: `partner[v]` is the block vertex red-matched to
/// `v`, or `None` when `v` is a stub.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wiring {
    pub partner: [Option<usize>; VERTICES],
}

impl Wiring {
    pub fn stubs(&self) -> Vec<usize> {
        (0..VERTICES).filter(|&v| self.partner[v].is_none()).collect()
    }

    pub fn internal_edges(&self) -> Vec<(usize, usize)> {
        (0..VERTICES)
            .filter_map(|v| self.partner[v].filter(|&w| w > v).map(|w| (v, w)))
            .collect()
    }

    pub fn case(&self) -> CaseId {
        let stub_rows: Vec<usize> = self.stubs().into_iter().map(row_of).collect();
        let edge_rows: Vec<(usize, usize)> = self
            .internal_edges()
            .into_iter()
            .map(|(v, w)| (row_of(v), row_of(w)))
            .collect();
        CaseId::classify(&stub_rows, &edge_rows)
    }

    /// Follows black and red edges through the block under one black pattern.
    /// Returns the stub pairs joined by paths and the number of closed loops.
    pub fn trace(&self, black_type: usize) -> (Vec<(usize, usize)>, u32) {
        let mut black = [0usize; VERTICES];
        for &(x, y) in &BLACK_TYPES[black_type] {
            black[x] = y;
            black[y] = x;
        }
        let mut seen = [false; VERTICES];
        let mut paths = Vec::new();
        for start in self.stubs() {
            if seen[start] {
                continue;
            }
            let mut v = start;
            let end = loop {
                seen[v] = true;
                let u = black[v];
                seen[u] = true;
                match self.partner[u] {
                    None => break u,
                    Some(w) => v = w,
                }
            };
            paths.push((start, end));
        }
        let mut loops = 0;
        for start in 0..VERTICES {
            if seen[start] {
                continue;
            }
            let mut v = start;
            loop {
                seen[v] = true;
                let u = black[v];
                seen[u] = true;
                v = self.partner[u].expect("non-stub vertices form closed cycles");
                if v == start {
                    break;
                }
            }
            loops += 1;
        }
        (paths, loops)
    }
}

/// All 76 partial red matchings of the six block vertices.
pub fn all_wirings() -> Vec<Wiring> {
    fn extend(partner: &mut [Option<usize>; VERTICES], done: &mut [bool; VERTICES], out: &mut Vec<Wiring>) {
        let Some(v) = (0..VERTICES).find(|&v| !done[v]) else {
            out.push(Wiring { partner: *partner });
            return;
        };
        done[v] = true;
        extend(partner, done, out);
        for w in v + 1..VERTICES {
            if done[w] {
                continue;
            }
            done[w] = true;
            partner[v] = Some(w);
            partner[w] = Some(v);
            extend(partner, done, out);
            partner[v] = None;
            partner[w] = None;
            done[w] = false;
        }
        done[v] = false;
    }
    let mut out = Vec::new();
    extend(&mut [None; VERTICES], &mut [false; VERTICES], &mut out);
    out
}

/// All moves sharing a case, a shift of the edge vector and a multiset of
/// created edge types. Loop counts differ, so they are kept as a weight
/// polynomial in `k` of degree at most 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveGroup {
    pub case: CaseId,
    /// `b = a + offset` where `b` is the smaller graph's edge vector.
    pub offset: [i64; 3],
    /// Number of created edges of each pair type (see [`pair_index`]).
    pub created: [u8; 6],
    /// `loop_weights[i]` counts the moves closing `i` loops.
    pub loop_weights: [u64; 4],
}

impl MoveGroup {
    /// Ways to choose, in a smaller graph with vector `b` at order `m`, the
    /// distinct red edges that the block's paths collapse into, including
    /// the two orientations of a same-row edge. Zero when `b` lacks them.
    pub fn combinatorial_factor(&self, b: EdgeVector, m: u32) -> u64 {
        let Ok((b11, b22, b33)) = b.derived_counts(m) else {
            return 0;
        };
        let avail = [b11, b22, b33, b.a12, b.a13, b.a23];
        let mut factor = 1u64;
        for (t, &need) in self.created.iter().enumerate() {
            let have = u64::from(avail[t]);
            for i in 0..u64::from(need) {
                if have < i + 1 {
                    return 0;
                }
                factor *= have - i;
            }
            if t < 3 {
                factor <<= need;
            }
        }
        factor
    }

    pub fn target(&self, a: EdgeVector) -> Option<EdgeVector> {
        a.offset(self.offset[0], self.offset[1], self.offset[2])
    }
}

fn build_moves() -> Vec<MoveGroup> {
    let mut groups: BTreeMap<(CaseId, [i64; 3], [u8; 6]), [u64; 4]> = BTreeMap::new();
    for wiring in all_wirings() {
        let case = wiring.case();
        let stubs = wiring.stubs();
        let mut base = [0i64; 3];
        for (v, w) in wiring.internal_edges() {
            let t = pair_index(row_of(v), row_of(w));
            if t >= 3 {
                base[t - 3] -= 1;
            }
        }
        for black_type in 0..BLACK_TYPES.len() {
            let (paths, loops) = wiring.trace(black_type);
            let assignments = 3usize.pow(stubs.len() as u32);
            for code in 0..assignments {
                let mut landing = [0usize; VERTICES];
                let mut c = code;
                for &s in &stubs {
                    landing[s] = c % 3;
                    c /= 3;
                }
                let mut offset = base;
                for &s in &stubs {
                    let t = pair_index(row_of(s), landing[s]);
                    if t >= 3 {
                        offset[t - 3] -= 1;
                    }
                }
                let mut created = [0u8; 6];
                for &(x, y) in &paths {
                    let t = pair_index(landing[x], landing[y]);
                    created[t] += 1;
                    if t >= 3 {
                        offset[t - 3] += 1;
                    }
                }
                groups.entry((case, offset, created)).or_default()[loops as usize] += 1;
            }
        }
    }
    groups
        .into_iter()
        .map(|((case, offset, created), loop_weights)| MoveGroup { case, offset, created, loop_weights })
        .collect()
}

/// The precomputed move table, built once per process.
pub fn moves() -> &'static [MoveGroup] {
    static MOVES: OnceLock<Vec<MoveGroup>> = OnceLock::new();
    MOVES.get_or_init(build_moves)
}
