//! Cell-by-cell check of the bundled toy cube against a second, independent
//! transcription of the four toy tables.

use stlattice::cube::Axis;
use stlattice::toy;

/// Per timestamp, per location L1..L10: the dimension numbers present.
const TABLES: [[&str; 10]; 4] = [
    // T1
    [
        "1245", "23456", "356", "125", "12345", "246", "1234", "456", "123", "345",
    ],
    // T2
    [
        "2345", "12356", "456", "123", "12456", "1456", "23456", "12456", "1234", "1345",
    ],
    // T3
    [
        "2456", "1235", "245", "126", "1246", "146", "2345", "1246", "12346", "145",
    ],
    // T4
    [
        "2345", "125", "246", "12", "12456", "124", "235", "146", "1246", "1245",
    ],
];

#[test]
fn toy_cube_matches_hand_transcription() {
    let cube = toy::cube();
    let labels = cube.labels();
    assert_eq!((cube.n_locs(), cube.n_dims(), cube.n_times()), (10, 6, 4));
    let mut expected_cells = 0;
    for (t, table) in TABLES.iter().enumerate() {
        let t_idx = labels
            .index_of(Axis::Timestamp, &format!("T{}", t + 1))
            .unwrap();
        for (l, row) in table.iter().enumerate() {
            let l_idx = labels
                .index_of(Axis::Location, &format!("L{}", l + 1))
                .unwrap();
            for j in 1..=6 {
                let j_idx = labels.index_of(Axis::Dimension, &format!("J{j}")).unwrap();
                let want = row.contains(char::from_digit(j, 10).unwrap());
                expected_cells += want as usize;
                assert_eq!(
                    cube.contains(l_idx, j_idx, t_idx),
                    want,
                    "cell (L{}, J{j}, T{})",
                    l + 1,
                    t + 1
                );
            }
        }
    }
    assert_eq!(cube.len(), expected_cells);
    assert_eq!(expected_cells, 149);
}

#[test]
fn per_slice_cell_counts() {
    let cube = toy::cube();
    let counts: Vec<usize> = (0..4)
        .map(|t| cube.facts().iter().filter(|f| f.2 == t).count())
        .collect();
    assert_eq!(counts, [36, 42, 37, 34]);
}
