use std::path::Path;
use std::process::Command;

const HEADER: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/include/torus_stab.h");

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(HEADER).unwrap();
    for name in [
        "typedef struct TsConfig TsConfig;",
        "TS_STATUS_OK = 0",
        "ts_config_parse",
        "ts_config_free",
        "ts_test",
        "ts_stabilize",
        "ts_status_message",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}

/// Compiles a small program against the header as C and as C++, when a
/// compiler is available.
#[test]
fn header_compiles() {
    let dir = std::env::temp_dir().join(format!("torus_stab_header_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        "#include \"torus_stab.h\"\n\
         int use(void) {\n\
           TsConfig *h = 0;\n\
           TsTestResult r;\n\
           if (ts_config_new(4, 4, &h) != TS_STATUS_OK) return 1;\n\
           ts_test(h, 0.1, 7, &r);\n\
           ts_config_free(h);\n\
           return r.accepted;\n\
         }\n",
    )
    .unwrap();
    let include = Path::new(HEADER).parent().unwrap();
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let Ok(out) = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang])
            .arg("-I")
            .arg(include)
            .arg(&src)
            .output()
        else {
            eprintln!("{compiler} not found; skipping");
            continue;
        };
        assert!(out.status.success(), "{compiler}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
