//! JSON in, DOT out, and back.
//!
//! cargo run --example dot_export

use ancestral::io::{parse_dot, parse_json, to_dot, to_json_pretty};

const INPUT: &str = r#"{
  "nodes": ["W", "Z", "X", "Y"],
  "edges": [
    {"u": "W", "v": "Z", "type": "directed"},
    {"u": "Z", "v": "X", "type": "bidirected"},
    {"u": "Z", "v": "Y", "type": "directed"},
    {"u": "X", "v": "Y", "type": "directed"}
  ]
}"#;

fn main() -> ancestral::Result<()> {
    let g = parse_json(INPUT)?;
    let dot = to_dot(&g);
    print!("{dot}");
    let back = parse_dot(&dot)?;
    assert_eq!(back.canonical_key(), g.canonical_key());
    println!("{}", to_json_pretty(&back));
    Ok(())
}
