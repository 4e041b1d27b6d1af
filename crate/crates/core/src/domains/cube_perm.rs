//! Facelet permutation model of the cube: the action of a move sequence
//! on the 48 movable stickers (centers are fixed). This is an
//! independent semantics for move sequences, used to check that the
//! rewrite rules in [`super::cube`] never change the physical cube
//! state.

use std::sync::OnceLock;

use crate::algebra::Element;
use crate::domains::cube::{CubeToken, Face};

type Vec3 = [i8; 3];

fn dot(a: Vec3, b: Vec3) -> i8 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Clockwise quarter turn (viewed from outside the face with outward
/// normal `n`): v ↦ n(n·v) − n×v.
fn rotate_cw(v: Vec3, n: Vec3) -> Vec3 {
    let k = dot(n, v);
    [
        n[0] * k - cross(n, v)[0],
        n[1] * k - cross(n, v)[1],
        n[2] * k - cross(n, v)[2],
    ]
}

/// Outward normal, in-face right, and in-face down direction. The
/// right/down pair fixes cell numbering only; the geometry of a turn
/// does not depend on it.
fn geometry(face: Face) -> (Vec3, Vec3, Vec3) {
    match face {
        Face::R => ([1, 0, 0], [0, 0, -1], [0, -1, 0]),
        Face::L => ([-1, 0, 0], [0, 0, 1], [0, -1, 0]),
        Face::U => ([0, 1, 0], [1, 0, 0], [0, 0, 1]),
        Face::D => ([0, -1, 0], [1, 0, 0], [0, 0, -1]),
        Face::F => ([0, 0, 1], [1, 0, 0], [0, -1, 0]),
        Face::B => ([0, 0, -1], [-1, 0, 0], [0, -1, 0]),
    }
}

fn face_index(face: Face) -> usize {
    Face::ALL.iter().position(|f| *f == face).unwrap()
}

/// Center cells are skipped: 6 faces × 8 movable cells.
pub const STICKERS: usize = 48;

fn sticker_at(index: usize) -> (Vec3, Vec3) {
    let (n, r, d) = geometry(Face::ALL[index / 8]);
    let rank = index % 8;
    let cell = if rank < 4 { rank } else { rank + 1 };
    let (row, col) = ((cell / 3) as i8 - 1, (cell % 3) as i8 - 1);
    let pos = [
        n[0] + col * r[0] + row * d[0],
        n[1] + col * r[1] + row * d[1],
        n[2] + col * r[2] + row * d[2],
    ];
    (pos, n)
}

fn index_of(pos: Vec3, facing: Vec3) -> usize {
    let face = Face::ALL
        .into_iter()
        .find(|f| geometry(*f).0 == facing)
        .expect("facing must be an outward normal");
    let (_, r, d) = geometry(face);
    let (col, row) = (dot(pos, r) + 1, dot(pos, d) + 1);
    let cell = (row * 3 + col) as usize;
    debug_assert_ne!(cell, 4, "center stickers are not indexed");
    let rank = if cell < 4 { cell } else { cell - 1 };
    face_index(face) * 8 + rank
}

/// Where each sticker ends up: `map[i]` is the destination of the
/// sticker starting at index `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StickerPermutation {
    map: [u8; STICKERS],
}

impl StickerPermutation {
    pub fn identity() -> Self {
        let mut map = [0u8; STICKERS];
        for (i, slot) in map.iter_mut().enumerate() {
            *slot = i as u8;
        }
        StickerPermutation { map }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, d)| i as u8 == *d)
    }

    /// `self` applied first, `then` after.
    pub fn then(&self, then: &StickerPermutation) -> StickerPermutation {
        let mut map = [0u8; STICKERS];
        for (i, slot) in map.iter_mut().enumerate() {
            *slot = then.map[self.map[i] as usize];
        }
        StickerPermutation { map }
    }
}

fn quarter_turn(face: Face) -> StickerPermutation {
    let n = geometry(face).0;
    let mut perm = StickerPermutation::identity();
    for i in 0..STICKERS {
        let (pos, facing) = sticker_at(i);
        if dot(pos, n) == 1 {
            perm.map[i] = index_of(rotate_cw(pos, n), rotate_cw(facing, n)) as u8;
        }
    }
    perm
}

fn base_turns() -> &'static [StickerPermutation; 6] {
    static TURNS: OnceLock<[StickerPermutation; 6]> = OnceLock::new();
    TURNS.get_or_init(|| {
        [
            quarter_turn(Face::R),
            quarter_turn(Face::L),
            quarter_turn(Face::U),
            quarter_turn(Face::D),
            quarter_turn(Face::F),
            quarter_turn(Face::B),
        ]
    })
}

/// Permutation realized by a raw token sequence (no canonicalization
/// involved, so this also gives meaning to non-canonical sequences).
pub fn permutation_of(tokens: &[CubeToken]) -> StickerPermutation {
    let mut perm = StickerPermutation::identity();
    for tok in tokens {
        let base = &base_turns()[face_index(tok.face)];
        for _ in 0..tok.turns.as_u8() {
            perm = perm.then(base);
        }
    }
    perm
}

/// Permutation of a cube element; `None` for other domains.
pub fn cube_permutation(element: &Element) -> Option<StickerPermutation> {
    element.as_move_sequence().map(permutation_of)
}
