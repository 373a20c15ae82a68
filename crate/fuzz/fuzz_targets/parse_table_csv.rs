#![no_main]

use kspectra::weights::{parse_table_csv, table_to_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&rank, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let rank = 1 + rank as usize % 4;
    if let Ok(table) = parse_table_csv(text, rank) {
        assert_eq!(parse_table_csv(&table_to_csv(&table, rank), rank).unwrap(), table);
    }
});
