import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codesum import jparse
from codesum.jparse import (
    CodeArea,
    EmptyProjectError,
    MethodCategory,
    MethodMetrics,
    ProjectStats,
    ReturnClass,
    Stereotype,
    categorize,
    compute_metrics,
    parse_sources,
    tag_code_areas,
)

GET_ICON_ONLY = """
public class IconSource {
    private Icon iconCache;
    private ClassLoader loader;
    private String iconName;

    public Icon getIcon() {
        if (iconCache == null) {
            try {
                iconCache = new ImageIcon(
                    loader.getResource(iconName));
            } catch (Exception e) {
                iconCache = null;
            }
        }
        return this.iconCache;
    }
}
"""

TWO_METHODS = """
class Pair {
    void a() {
        b();
        b();
    }
    void b() {
        int x = 1;
    }
}
"""


class TestParseProject:
    def test_geticon_single_file(self):
        project = parse_sources([("IconSource.java", GET_ICON_ONLY)])
        assert len(project.methods) == 1
        m = project.methods[0]
        assert m.fqname.endswith(".getIcon")
        assert m.metrics.param_count == 0
        assert m.loc == 7

    def test_empty_directory(self, tmp_path):
        with pytest.raises(EmptyProjectError):
            jparse.parse_project(tmp_path)

    def test_call_occurrence_counting(self):
        project = parse_sources([("Pair.java", TWO_METHODS)])
        a = project.find("Pair.a")
        b = project.find("Pair.b")
        assert a.metrics.fan_out == 2
        assert b.metrics.fan_in == 2
        assert ("Pair.a", "Pair.b", 2) in project.edges

    def test_unreadable_file_collected(self, tmp_path):
        good = tmp_path / "Good.java"
        good.write_text(TWO_METHODS, "utf-8")
        bad = tmp_path / "Bad.java"
        bad.write_bytes(b"\xff\xfe\x00 broken")
        project = jparse.parse_project(tmp_path)
        assert len(project.methods) == 2
        assert any("Bad.java" in f for f, _e in project.errors)

    def test_fan_totals_match_edges(self, icon_project):
        total_fan_in = sum(m.metrics.fan_in for m in icon_project.methods)
        total_fan_out = sum(m.metrics.fan_out for m in icon_project.methods)
        total_edges = sum(c for _a, _b, c in icon_project.edges)
        assert total_fan_in == total_fan_out == total_edges

    def test_reparse_is_byte_identical(self, icon_project):
        from codesum.cli import demo_project_dir

        again = jparse.parse_project(demo_project_dir())
        assert jparse.project_to_json_str(icon_project) == jparse.project_to_json_str(again)

    def test_json_round_trip(self, icon_project):
        doc = icon_project.to_json()
        restored = jparse.ProjectModel.from_json(doc)
        assert restored.to_json() == doc


class TestTagCodeAreas:
    def test_signature_name_is_method_name_area(self):
        project = parse_sources([("IconSource.java", GET_ICON_ONLY)])
        areas = tag_code_areas(project.methods[0])
        assert areas["getIcon"] is CodeArea.MethodNameReturn

    def test_branch_condition_occurrence(self):
        project = parse_sources([("IconSource.java", GET_ICON_ONLY)])
        m = project.methods[0]
        branch_tokens = {t for t, a, _ln in m.body_tokens if a is CodeArea.Branches}
        assert {"iconCache", "null"} <= branch_tokens

    def test_parameter_beats_loop_body(self):
        src = """
        class C {
            void run(int limit) {
                for (int i = 0; i < limit; i++) {
                    count = count + limit;
                }
            }
        }
        """
        project = parse_sources([("C.java", src)])
        areas = tag_code_areas(project.methods[0])
        assert areas["limit"] is CodeArea.Parameters

    def test_every_token_tagged(self, icon_project):
        for m in icon_project.methods:
            for token, area, _line in m.body_tokens:
                assert isinstance(area, CodeArea)

    def test_term_area_is_min_over_occurrences(self, icon_project):
        for m in icon_project.methods:
            areas = tag_code_areas(m)
            for token, area, _line in m.body_tokens:
                assert areas[token] <= area

    def test_return_statement_is_ending_unit(self):
        project = parse_sources([("IconSource.java", GET_ICON_ONLY)])
        m = project.methods[0]
        occurrences = [(t, a) for t, a, _ln in m.body_tokens if t == "iconCache"]
        assert (("iconCache", CodeArea.EndingUnits)) in occurrences

    def test_printout_statement_is_ending_unit(self):
        src = """
        class C {
            void report(String status) {
                System.out.println(status);
            }
        }
        """
        project = parse_sources([("C.java", src)])
        m = project.methods[0]
        areas = dict(tag_code_areas(m))
        assert areas["println"] is CodeArea.EndingUnits

    def test_try_catch_tokens_are_error_handling(self):
        project = parse_sources([("IconSource.java", GET_ICON_ONLY)])
        m = project.methods[0]
        occ = {t: a for t, a, _ln in m.body_tokens if t in ("try", "catch", "Exception")}
        assert occ == {
            "try": CodeArea.ErrorHandling,
            "catch": CodeArea.ErrorHandling,
            "Exception": CodeArea.ErrorHandling,
        }


class TestComputeMetrics:
    def test_geticon_complexity_five(self, icon_project):
        m = icon_project.find("IconSource.getIcon")
        assert m.metrics.complexity == 5

    def test_straight_line_clamps_to_three(self):
        src = """
        class C {
            int three() {
                int a = 1;
                int b = 2;
                return a + b;
            }
        }
        """
        project = parse_sources([("C.java", src)])
        m = project.methods[0]
        assert m.loc == 3
        assert m.metrics.complexity == 3

    def test_upper_clamp_at_fifteen(self):
        # 6 ifs, 4 loops, 2 trys, 120 lines: 2+6+4+2+3 = 17 -> 15
        body_lines = []
        for i in range(6):
            body_lines.append(f"if (x > {i}) {{ x = x + 1; }}")
        for i in range(4):
            body_lines.append(f"while (x < {i}) {{ x = x + 1; }}")
        for _ in range(2):
            body_lines.append("try { x = x + 1; } catch (Exception e) { x = 0; }")
        while len(body_lines) < 120:
            body_lines.append(f"x = x + {len(body_lines)};")
        src = "class C { void busy() {\n" + "\n".join(body_lines) + "\n} }"
        project = parse_sources([("C.java", src)])
        m = project.methods[0]
        assert m.loc == 120
        assert m.metrics.complexity == 15

    def test_complexity_monotone_in_branches(self):
        def complexity(n_ifs):
            lines = [f"if (x > {i}) {{ x = x + 1; }}" for i in range(n_ifs)] or ["x = 1;"]
            src = "class C { void f() {\n" + "\n".join(lines) + "\n} }"
            return parse_sources([("C.java", src)]).methods[0].metrics.complexity

        values = [complexity(n) for n in range(0, 16)]
        assert all(a <= b for a, b in zip(values, values[1:]))
        assert values[-1] == 15

    def test_return_classes(self):
        src = """
        class C {
            void v() { int x = 1; }
            boolean b() { return true; }
            int n() { return 1; }
            String s() { return "x"; }
            java.util.List items() { return list; }
            Widget w() { return widget; }
        }
        """
        project = parse_sources([("C.java", src)])
        classes = {m.name: m.metrics.return_class for m in project.methods}
        assert classes == {
            "v": ReturnClass.void,
            "b": ReturnClass.boolean,
            "n": ReturnClass.numeric,
            "s": ReturnClass.string,
            "items": ReturnClass.vector,
            "w": ReturnClass.object,
        }

    def test_stereotypes(self, icon_project):
        stereo = {m.fqname: m.metrics.stereotype for m in icon_project.methods}
        assert stereo["IconSource.getIcon"] is Stereotype.collaborator
        assert stereo["IconSource.getTitle"] is Stereotype.accessor
        assert stereo["IconSource.setIconName"] is Stereotype.mutator
        assert stereo["IconSource.hasLoader"] is Stereotype.command

    def test_static_flag(self):
        src = "class C { static int f() { return 1; } }"
        project = parse_sources([("C.java", src)])
        assert project.methods[0].metrics.is_static
        assert MethodCategory.static_method in project.methods[0].categories


def _metrics(loc=5, params=0, ret=ReturnClass.object, fan_in=0, fan_out=0,
             stereotype=Stereotype.command, static=False):
    return MethodMetrics(
        loc=loc,
        param_count=params,
        return_class=ret,
        fan_in=fan_in,
        fan_out=fan_out,
        stereotype=stereotype,
        is_static=static,
        complexity=3,
    )


class TestCategorize:
    def test_walkthrough_example(self, icon_project):
        cats = icon_project.find("IconSource.getIcon").categories
        assert {
            MethodCategory.loc_small,
            MethodCategory.params_none,
            MethodCategory.high_fan_in,
            MethodCategory.stereo_collaborator,
        } <= cats

    def test_medium_bucket_and_params(self):
        stats = ProjectStats.of([0], [0])
        cats = categorize(_metrics(loc=25, params=2), stats)
        assert MethodCategory.loc_medium in cats
        assert MethodCategory.params_1to3 in cats

    def test_decile_only_top_method(self):
        fan_ins = list(range(10))
        stats = ProjectStats.of(fan_ins, [0] * 10)
        high = [
            fi for fi in fan_ins
            if MethodCategory.high_fan_in in categorize(_metrics(fan_in=fi), stats)
        ]
        assert high == [9]

    @given(loc=st.integers(min_value=1, max_value=500))
    def test_loc_buckets_partition(self, loc):
        stats = ProjectStats.of([0], [0])
        cats = categorize(_metrics(loc=loc), stats)
        buckets = cats & {MethodCategory.loc_small, MethodCategory.loc_medium, MethodCategory.loc_large}
        assert len(buckets) == 1

    @given(
        loc=st.integers(min_value=1, max_value=200),
        params=st.integers(min_value=0, max_value=8),
        stereotype=st.sampled_from(list(Stereotype)),
    )
    @settings(max_examples=50)
    def test_at_least_one_category(self, loc, params, stereotype):
        stats = ProjectStats.of([0, 1, 2], [0, 1, 2])
        cats = categorize(_metrics(loc=loc, params=params, stereotype=stereotype), stats)
        assert len(cats) >= 1
