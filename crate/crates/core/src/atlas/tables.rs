//! Eigenlattice tables for coarse deformation classes of real cubic fourfolds.
//!
//! `-A1` in the classical notation is the rank-one lattice `<-2>`, `A1` is `<2>`.

use crate::lattice::{Atom, LatticeExpr};

/// Largest `i` and `j` that occur in the tables.
pub const MAX_I: u32 = 10;
pub const MAX_J: u32 = 9;

#[derive(Clone, Copy)]
enum Head {
    MinusA1,
    U,
}

struct Row {
    head: Head,
    /// Multiplicity of `A1` is `offset - k` where `k` is the free coordinate.
    offset: i64,
    tail: &'static [(u32, Atom)],
}

const SIX: Atom = Atom::Form(6);
const A2: Atom = Atom::A(2);
const D4: Atom = Atom::D(4);
const E7: Atom = Atom::E(7);
const E8: Atom = Atom::E(8);

/// `M_+^0` of `C^{i,j}`, indexed by `i`.
const PLUS_ROWS: [Row; 11] = [
    Row {
        head: Head::MinusA1,
        offset: 9,
        tail: &[(1, SIX)],
    },
    Row {
        head: Head::MinusA1,
        offset: 9,
        tail: &[(1, A2)],
    },
    Row {
        head: Head::U,
        offset: 9,
        tail: &[(1, A2)],
    },
    Row {
        head: Head::U,
        offset: 6,
        tail: &[(1, A2), (1, D4)],
    },
    Row {
        head: Head::MinusA1,
        offset: 5,
        tail: &[(1, SIX), (1, E8)],
    },
    Row {
        head: Head::MinusA1,
        offset: 5,
        tail: &[(1, A2), (1, E8)],
    },
    Row {
        head: Head::U,
        offset: 5,
        tail: &[(1, A2), (1, E8)],
    },
    Row {
        head: Head::U,
        offset: 2,
        tail: &[(1, A2), (1, D4), (1, E8)],
    },
    Row {
        head: Head::MinusA1,
        offset: 1,
        tail: &[(1, SIX), (2, E8)],
    },
    Row {
        head: Head::MinusA1,
        offset: 1,
        tail: &[(1, A2), (2, E8)],
    },
    Row {
        head: Head::U,
        offset: 1,
        tail: &[(1, A2), (2, E8)],
    },
];

/// `M_-` of `C^{i,j}`, indexed by `j`.
const MINUS_ROWS: [Row; 10] = [
    Row {
        head: Head::MinusA1,
        offset: 10,
        tail: &[],
    },
    Row {
        head: Head::U,
        offset: 10,
        tail: &[],
    },
    Row {
        head: Head::U,
        offset: 7,
        tail: &[(1, D4)],
    },
    Row {
        head: Head::MinusA1,
        offset: 6,
        tail: &[(1, E7)],
    },
    Row {
        head: Head::MinusA1,
        offset: 6,
        tail: &[(1, E8)],
    },
    Row {
        head: Head::U,
        offset: 6,
        tail: &[(1, E8)],
    },
    Row {
        head: Head::U,
        offset: 3,
        tail: &[(1, D4), (1, E8)],
    },
    Row {
        head: Head::MinusA1,
        offset: 2,
        tail: &[(1, E7), (1, E8)],
    },
    Row {
        head: Head::MinusA1,
        offset: 2,
        tail: &[(2, E8)],
    },
    Row {
        head: Head::U,
        offset: 2,
        tail: &[(2, E8)],
    },
];

fn expand(row: &Row, k: u32) -> Option<LatticeExpr> {
    let a1 = row.offset - i64::from(k);
    if a1 < 0 {
        return None;
    }
    let head = match row.head {
        Head::MinusA1 => Atom::Form(-2),
        Head::U => Atom::U,
    };
    let mut parts = vec![(1, head, 1), (a1 as u32, Atom::A(1), 1)];
    parts.extend(row.tail.iter().map(|&(m, a)| (m, a, 1)));
    Some(LatticeExpr::from_counts(&parts).expect("table rows are valid expressions"))
}

/// `M_+^0(C^{i,j})`, or `None` where a multiplicity would be negative.
pub fn plus_table(i: u32, j: u32) -> Option<LatticeExpr> {
    PLUS_ROWS.get(i as usize).and_then(|row| expand(row, j))
}

/// `M_-(C^{i,j})`, or `None` where a multiplicity would be negative.
pub fn minus_table(i: u32, j: u32) -> Option<LatticeExpr> {
    MINUS_ROWS.get(j as usize).and_then(|row| expand(row, i))
}

/// `(i, j)` pairs admitted by the `M_+^0` table.
pub fn plus_domain() -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for i in 0..PLUS_ROWS.len() as u32 {
        let mut j = 0;
        while plus_table(i, j).is_some() {
            out.push((i, j));
            j += 1;
        }
    }
    out.sort();
    out
}

/// `(i, j)` pairs admitted by the `M_-` table.
pub fn minus_domain() -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for j in 0..MINUS_ROWS.len() as u32 {
        let mut i = 0;
        while minus_table(i, j).is_some() {
            out.push((i, j));
            i += 1;
        }
    }
    out.sort();
    out
}

/// Special (type I twin) vertices: `(i, j, M_+^0, M_-)`.
pub const SPECIAL_ROWS: [(u32, u32, &str, &str); 11] = [
    (0, 3, "U(2)+E6(2)", "U(2)+3*D4"),
    (1, 8, "U(2)+A2", "U(2)+2*E8"),
    (1, 4, "U+E6(2)", "U+3*D4"),
    (2, 5, "U(2)+A2+D4", "U(2)+D4+E8"),
    (3, 2, "U(2)+A2+2*D4", "U(2)+2*D4"),
    (4, 3, "U+A2+2*D4", "U+2*D4"),
    (5, 4, "U(2)+A2+E8", "U(2)+E8"),
    (6, 1, "U(2)+A2+D4+E8", "U(2)+D4"),
    (9, 0, "U(2)+A2+2*E8", "U(2)"),
    (2, 1, "U+A2+E8(2)", "U+E8(2)"),
    (1, 0, "U(2)+A2+E8(2)", "U(2)+E8(2)"),
];
