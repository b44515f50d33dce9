//! Writing and reading edge lists, and aligning two files by node id.
//!
//! cargo run --release --example edge_lists

use pairnet::cli::align_graphs;
use pairnet::netcore::{read_edge_list, read_node_map, write_graph, Graph, NodeMap};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("pairnet-edge-lists");
    std::fs::create_dir_all(&dir)?;

    let names = NodeMap::from_names(["alice", "bob", "carol", "dave", "erin"])?;
    let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3)]).with_labels(names);
    let path = dir.join("friends.edges");
    write_graph(&path, &g)?;
    println!("{}", std::fs::read_to_string(&path)?);

    // The same people listed in another order, with a self-loop and a repeat.
    let other = dir.join("friends_later.edges");
    std::fs::write(
        &other,
        "dave carol\nerin alice\nbob bob\nerin alice\ncarol bob\n",
    )?;
    let read = read_edge_list(&other, None)?;
    println!(
        "dropped {} self-loop(s), {} duplicate(s)",
        read.self_loops, read.duplicate_edges
    );
    let (g1, g2) = align_graphs(g, read.graph)?;
    let labels = g1.labels().expect("labelled");
    for (u, v) in g2.edges() {
        println!("second graph: {} -- {}", labels.name(u), labels.name(v));
    }

    // A node map fixes the index order for both files at once.
    let map_path = dir.join("nodes.txt");
    std::fs::write(&map_path, "erin\ndave\ncarol\nbob\nalice\n")?;
    let map = read_node_map(&map_path)?;
    let fixed = read_edge_list(&path, Some(&map))?.graph;
    let erin = map.get("erin").expect("listed");
    println!(
        "with the node map erin is index {erin}, degree {}",
        fixed.degree(erin)
    );
    Ok(())
}
