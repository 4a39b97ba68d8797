//! Regenerates `data/*.json` from the transcription.
//!
//! ```text
//! cargo run -p kbeta --example gen_catalog [out_dir]
//! ```

use std::path::PathBuf;

use kbeta::catalog::{shipped_keys, transcribe};
use kbeta::gca::format;

fn main() {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"));
    std::fs::create_dir_all(&out).expect("create output directory");
    for key in shipped_keys() {
        let pres = transcribe(&key).unwrap_or_else(|e| panic!("{key}: {e}"));
        let path = out.join(key.file_name());
        std::fs::write(&path, format::to_string(&pres)).expect("write data file");
        println!("wrote {}", path.display());
    }
}
