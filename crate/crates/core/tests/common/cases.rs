/// One pinned example per subcommand: golden name, expected exit code, arguments.
pub const CASES: &[(&str, i32, &[&str])] = &[
    ("validate", 2, &["validate", "corrupt_complex.chain"]),
    ("mass", 0, &["mass", "square_boundary.chain"]),
    ("massp", 0, &["massp", "heavy_edges.chain", "--p", "2"]),
    ("reduce", 0, &["reduce", "heavy_edges.chain", "--p", "3"]),
    ("boundary", 0, &["boundary", "unit_square.chain"]),
    ("flatnorm", 0, &["flatnorm", "path_endpoints.chain"]),
    ("flatnormp", 0, &["flatnormp", "square_boundary.chain", "--p", "2"]),
    ("fill", 0, &["fill", "square_boundary.chain", "--p", "3"]),
    ("isoratio", 0, &["isoratio", "square_boundary.chain", "--p", "2"]),
    ("restrict", 0, &["restrict", "unit_square.chain", "--axis", "1", "--r", "0.5"]),
    ("slice", 0, &["slice", "unit_square.chain", "--axis", "1", "--r", "0.5"]),
    ("islice", 0, &["islice", "unit_square.chain", "--axis", "1", "--axis", "2", "--r", "0.5", "--r", "0.25"]),
    ("slicemass", 0, &["slicemass", "unit_square.chain", "--axis", "1", "--p", "2"]),
    ("slicestar", 0, &["slicestar", "square_boundary.chain", "--p", "2"]),
    ("deform", 0, &["deform", "fine_edge.chain", "--eta", "1", "--rho", "0.5,0.5", "--p", "2"]),
    ("refinecompare", 0, &["refinecompare", "square_boundary.chain", "--p", "2", "--subdiv", "2"]),
    ("sysboundary", 0, &["sysboundary", "parallel_curves.chain"]),
    ("preprocess", 0, &["preprocess", "chained_curves.chain"]),
    ("cyclecut", 0, &["cyclecut", "parallel_curves.chain", "--p", "2"]),
    ("decompose", 0, &["decompose", "square_boundary.chain"]),
    ("cyclerep", 0, &["cyclerep", "two_paths.chain", "--p", "2"]),
    ("cone", 0, &["cone", "segment.chain", "--apex", "0,0"]),
    ("conereport", 0, &["conereport", "segment.chain", "--apex", "0,0", "--p", "2"]),
];
