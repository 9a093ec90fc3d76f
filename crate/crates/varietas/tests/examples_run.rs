//! Keeps every runnable example compiling and passing under `cargo test`.

macro_rules! example_test {
    ($name:ident) => {
        mod $name {
            include!(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/examples/",
                stringify!($name),
                ".rs"
            ));

            #[test]
            fn runs() {
                main().expect("example should run cleanly");
            }
        }
    };
}

example_test!(canonical_automata);
example_test!(syntactic_monoid);
example_test!(free_lattices);
example_test!(diamond_bimodule);
example_test!(minimal_recognizer);
example_test!(duality_roundtrip);
example_test!(qfa_simulation);
example_test!(cotheory_check);
