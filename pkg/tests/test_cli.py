from ccker.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


class TestGen:
    def test_deterministic_bytes(self, tmp_path, capsys):
        a, b = tmp_path / "a.urfc", tmp_path / "b.urfc"
        args = ["gen", "--problem", "urfc", "--d", "2", "--l", "2", "--q", "3",
                "--n", "6", "--seed", "7"]
        assert main(args + ["-o", str(a)]) == 0
        assert main(args + ["-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_seed_changes_output(self, tmp_path):
        a, b = tmp_path / "a.urfc", tmp_path / "b.urfc"
        base = ["gen", "--problem", "urfc", "--d", "2", "--l", "2", "--q", "3",
                "--n", "6"]
        main(base + ["--seed", "1", "-o", str(a)])
        main(base + ["--seed", "2", "-o", str(b)])
        assert a.read_bytes() != b.read_bytes()

    def test_missing_flag_is_usage_error(self, tmp_path, capsys):
        code, _ = run(capsys, "gen", "--problem", "urfc", "--d", "2")
        assert code == 2


class TestAnalyze:
    def test_nur_shorthand(self, tmp_path, capsys):
        path = tmp_path / "rel.nur"
        path.write_text("nur d=2 l=2 q=3\n")
        code, out = run(capsys, "analyze", str(path))
        assert code == 0
        lines = dict(line.split("=", 1) for line in out.strip().splitlines())
        assert lines["permutation_invariant"] == "yes"
        assert lines["max_or_arity"] == "3"
        assert lines["eta"] == "3"

    def test_explicit_full_relation(self, tmp_path, capsys):
        path = tmp_path / "full.rel"
        tuples = [f"{a} {b}" for a in (1, 2) for b in (1, 2)]
        path.write_text("relation q=2 r=2\n" + "\n".join(tuples) + "\n")
        code, out = run(capsys, "analyze", str(path))
        assert code == 0
        assert "max_or_arity=0" in out

    def test_malformed_file(self, tmp_path, capsys):
        path = tmp_path / "bad.rel"
        path.write_text("garbage\n")
        code, _ = run(capsys, "analyze", str(path))
        assert code == 2


class TestSolve:
    def test_cnf_nae_count(self, tmp_path, capsys):
        path = tmp_path / "f.cnf"
        path.write_text("p cnf 3 1\n1 2 3 0\n")
        code, out = run(capsys, "solve", "--problem", "cnf", "--mode", "nae",
                        "--count", str(path))
        assert code == 0
        assert out.splitlines() == ["YES", "count=6"]

    def test_budget_exit_code(self, tmp_path, capsys):
        main(["gen", "--problem", "urfc", "--d", "1", "--l", "2", "--q", "3",
              "--n", "8", "--seed", "1", "-o", str(tmp_path / "big.urfc")])
        code, _ = run(capsys, "solve", "--problem", "urfc", "--budget", "10",
                      str(tmp_path / "big.urfc"))
        assert code == 3


class TestKernelizeAndVerify:
    def test_urfc_kernel_verifies(self, tmp_path, capsys):
        inst = tmp_path / "i.urfc"
        kern = tmp_path / "i.kern"
        main(["gen", "--problem", "urfc", "--d", "2", "--l", "2", "--q", "3",
              "--n", "6", "--seed", "5", "--density", "0.8", "-o", str(inst)])
        code, out = run(capsys, "kernelize", "--problem", "urfc", str(inst),
                        "-o", str(kern))
        assert code == 0
        assert "method=poly" in out
        header = kern.read_text().splitlines()[0]
        assert header.startswith("# method=")
        code, _ = run(capsys, "verify", "--mode", "kernel", "--problem", "urfc",
                      str(inst), str(kern))
        assert code == 0

    def test_verify_detects_mismatch(self, tmp_path, capsys):
        good = tmp_path / "good.urfc"
        bad = tmp_path / "bad.urfc"
        good.write_text(
            "graph n=2 m=0\ncolors q=3\nblock d=1 l=2 count=1\n1 2\n"
        )
        bad.write_text("graph n=2 m=0\ncolors q=3\nblock d=1 l=2 count=0\n")
        code, out = run(capsys, "verify", "--mode", "kernel", "--problem", "urfc",
                        str(good), str(bad))
        assert code == 1
        assert "mismatch" in out

    def test_cliquekv_kernel_verifies(self, tmp_path, capsys):
        inst = tmp_path / "c.ckv"
        kern = tmp_path / "c.kern"
        main(["gen", "--problem", "cliquekv", "--k", "4", "--t", "2",
              "--count", "2", "--seed", "3", "-o", str(inst)])
        assert main(["kernelize", "--problem", "cliquekv", "--q", "3", "--t", "2",
                     str(inst), "-o", str(kern)]) == 0
        capsys.readouterr()
        code, _ = run(capsys, "verify", "--mode", "kernel", "--problem",
                      "cliquekv", "--q", "3", str(inst), str(kern))
        assert code == 0

    def test_rcc_product_pruning(self, tmp_path, capsys):
        inst = tmp_path / "p.rcc"
        kern = tmp_path / "p.kern"
        lines = ["graph n=6 m=0", "rel q=2 r=3 count=6", "1 1 2", "1 2 1",
                 "1 2 2", "2 1 1", "2 1 2", "2 2 1"]
        constraints = [f"{a} {b} {c}" for a in (1, 2) for b in (3, 4) for c in (5, 6)]
        inst.write_text("\n".join(lines + constraints) + "\n")
        code, out = run(capsys, "kernelize", "--problem", "rcc", str(inst),
                        "-o", str(kern))
        assert code == 0
        assert "removed=1" in out
        code, _ = run(capsys, "verify", "--mode", "kernel", "--problem", "rcc",
                      str(inst), str(kern))
        assert code == 0


class TestReduce:
    def test_full_sat_pipeline(self, tmp_path, capsys):
        cnf = tmp_path / "f.cnf"
        cnf.write_text("p cnf 3 2\n1 2 3 0\n-1 -2 3 0\n")
        rel = tmp_path / "rel.nur"
        rel.write_text("nur d=1 l=3 q=5\n")
        rclc = tmp_path / "f.rclc"
        rcc = tmp_path / "f.rcc"
        assert main(["reduce", "--transform", "sat-rclc", "--relation", str(rel),
                     str(cnf), "-o", str(rclc)]) == 0
        assert main(["verify", "--mode", "reduction", "--transform", "sat-rclc",
                     str(cnf), str(rclc)]) == 0
        assert main(["reduce", "--transform", "rclc-rcc", str(rclc),
                     "-o", str(rcc)]) == 0
        assert main(["verify", "--mode", "reduction", "--transform", "rclc-rcc",
                     str(rclc), str(rcc)]) == 0
        capsys.readouterr()

    def test_nae_and_hypergraph(self, tmp_path, capsys):
        cnf = tmp_path / "f.cnf"
        cnf.write_text("p cnf 3 1\n1 -2 3 0\n")
        urfc = tmp_path / "f.urfc"
        hg = tmp_path / "f.hg"
        assert main(["reduce", "--transform", "nae-urfc", "--variant",
                     "singletons", str(cnf), "-o", str(urfc)]) == 0
        assert main(["verify", "--mode", "reduction", "--transform", "nae-urfc",
                     str(cnf), str(urfc)]) == 0
        gen_urfc = tmp_path / "g.urfc"
        main(["gen", "--problem", "urfc", "--d", "1", "--l", "3", "--q", "3",
              "--n", "5", "--seed", "2", "-o", str(gen_urfc)])
        assert main(["reduce", "--transform", "urfc-hypergraph", str(gen_urfc),
                     "-o", str(hg)]) == 0
        assert main(["verify", "--mode", "reduction", "--transform",
                     "urfc-hypergraph", str(gen_urfc), str(hg)]) == 0
        capsys.readouterr()

    def test_cliquekv_loop(self, tmp_path, capsys):
        ckv = tmp_path / "c.ckv"
        gurfc = tmp_path / "c.gurfc"
        back = tmp_path / "c2.ckv"
        main(["gen", "--problem", "cliquekv", "--k", "4", "--t", "2",
              "--count", "2", "--seed", "9", "-o", str(ckv)])
        assert main(["reduce", "--transform", "cliquekv-gurfc", "--q", "3",
                     "--t", "2", str(ckv), "-o", str(gurfc)]) == 0
        assert main(["verify", "--mode", "reduction", "--transform",
                     "cliquekv-gurfc", "--q", "3", str(ckv), str(gurfc)]) == 0
        assert main(["reduce", "--transform", "gurfc-cliquekv", str(gurfc),
                     "-o", str(back)]) == 0
        assert main(["verify", "--mode", "reduction", "--transform",
                     "gurfc-cliquekv", str(gurfc), str(back)]) == 0
        capsys.readouterr()

    def test_report_printed_as_key_value(self, tmp_path, capsys):
        cnf = tmp_path / "f.cnf"
        cnf.write_text("p cnf 2 1\n1 -2 0\n")
        out_path = tmp_path / "f.urfc"
        code, out = run(capsys, "reduce", "--transform", "nae-urfc", "--variant",
                        "pairs", str(cnf), "-o", str(out_path))
        assert code == 0
        assert "reduction=nae_to_urfc_pairs" in out
        assert "output_vertices=4" in out
