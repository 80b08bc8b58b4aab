import random

import pytest

from specforge.assets import SAMPLE_CATALOG_DIR
from specforge.catalog import load_catalog_set
from specforge.errors import RuleError, SessionError, SpecForgeError
from specforge.rules import (
    Col,
    Const,
    Input,
    Menu,
    MenuPrompt,
    InputPrompt,
    SetVar,
    Var,
    convert_units,
    parse_builtins,
    parse_menus,
    parse_rules,
    run_script,
    start_session,
    validate_program,
)


@pytest.fixture(scope="module")
def catalog():
    return load_catalog_set(SAMPLE_CATALOG_DIR)


# --- parser -----------------------------------------------------------------

def test_parse_concatenation_rule():
    program = parse_rules(
        'naimenovanie = const("Вентиль ") col(MARKA) const(" Ду") col(X_1)\n'
    )
    assert program.targets == {
        "naimenovanie": [Const("Вентиль "), Col("MARKA"), Const(" Ду"), Col("X_1")],
    }


def test_parse_setvar_and_input_with_unit():
    program = parse_rules('length = setvar(L, input(number,"Длина, м","м")) \n'
                          'naim_teh = var(L)\n')
    assert program.targets["length"] == [
        SetVar("L", Input("number", "Длина, м", "м"))
    ]
    assert program.targets["naim_teh"] == [Var("L")]


def test_parse_comments_and_blank_lines():
    program = parse_rules("# comment\n\nzavod = const(\"З-д\")  # trailing\n")
    assert program.targets == {"zavod": [Const("З-д")]}


def test_parse_escaped_quotes():
    program = parse_rules('naimenovanie = const("маш. \\"Engel\\"")\n')
    assert program.targets["naimenovanie"] == [Const('маш. "Engel"')]


def test_parse_error_has_line_number():
    with pytest.raises(RuleError) as err:
        parse_rules("zavod = const(\"ok\")\nbad ===\n")
    assert "line 2" in str(err.value)


def test_target_without_fragments_rejected():
    with pytest.raises(RuleError):
        parse_rules("zavod =\n")


def test_validate_unknown_column():
    program = parse_rules("a = col(X_9)\n")
    with pytest.raises(RuleError):
        validate_program(program, "t", ["MARKA"], set(), set())


def test_validate_var_before_setvar():
    program = parse_rules("a = var(L)\nb = setvar(L, const(\"x\"))\n")
    with pytest.raises(RuleError) as err:
        validate_program(program, "t", [], set(), set())
    assert "before setvar" in str(err.value)


def test_validate_empty_program_rejected():
    with pytest.raises(RuleError):
        validate_program(parse_rules(""), "t", [], set(), set())


def test_parse_menus_roundtrip():
    menus = parse_menus("[MENU A]\nодин\nдва\n\n[MENU B]\nx\n")
    assert menus == {"A": ["один", "два"], "B": ["x"]}


def test_parse_menus_duplicate_name():
    with pytest.raises(RuleError):
        parse_menus("[MENU A]\nx\n[MENU A]\ny\n")


def test_parse_builtins_structure():
    trees = parse_builtins(
        "[BUILTIN t]\n[NODE root] Выбор\nа -> node:leafy\nб -> value:Б\n"
        "[NODE leafy] Дальше\nx -> value:X\n"
    )
    assert trees["t"].root == "root"
    assert trees["t"].nodes["root"].options[0].node == "leafy"
    assert trees["t"].nodes["leafy"].options[0].value == "X"


def test_parse_builtins_unknown_node_rejected():
    with pytest.raises(RuleError):
        parse_builtins("[BUILTIN t]\n[NODE root] В\nа -> node:nope\n")


# --- unit conversion -----------------------------------------------------------

def test_convert_meters_exact():
    assert convert_units(2, "м") == 2000
    assert isinstance(convert_units(2, "м"), int)


def test_convert_identity():
    assert convert_units(50, "мм") == 50


def test_convert_unknown_unit():
    with pytest.raises(SpecForgeError):
        convert_units(1, "фут")


def test_convert_pressure_exact_rational():
    assert convert_units(1, "кгс/см2") == pytest.approx(98.0665)
    assert convert_units(10000, "кгс/см2") == 980665


def test_convert_comma_decimal():
    assert convert_units("1,5", "м") == 1500


# --- sessions -------------------------------------------------------------------

def test_session_without_prompts_done(catalog):
    session = start_session(catalog, "mt_valve_small", 2)
    assert session.done
    fields = session.finish()
    assert fields.fields["naimenovanie"] == "Вентиль 15кч18п9 Ду50"
    assert fields.fields["oboznachenie"] == "ГОСТ 9086-74"


def test_direct_menu_prompts_first(catalog):
    session = start_session(catalog, "kip_manometers", 0)
    prompt = session.next_prompt()
    assert isinstance(prompt, MenuPrompt)
    assert prompt.options == ("0,6", "1", "1,6", "2,5", "4")
    session.answer(0)
    prompt = session.next_prompt()
    assert prompt.options == ("радиальный", "осевой")
    session.answer(1)
    prompt = session.next_prompt()
    assert isinstance(prompt, InputPrompt)
    assert prompt.kind == "string"
    session.answer("421212")
    assert session.done
    fields = session.finish()
    assert fields.fields["naimenovanie"] == "Манометр МП4-У до 0,6 кгс/см2"
    assert fields.fields["kod_oborud"] == "421212"


def test_external_menu_options_in_file_order(catalog):
    session = start_session(catalog, "mt_valve_large", 1)
    session.answer(1)  # direct menu: Чугун|Сталь -> Сталь
    prompt = session.next_prompt()
    assert prompt.options == ("Чугун", "Сталь 20", "12Х18Н10Т")
    session.answer(2)
    assert session.done
    fields = session.finish()
    assert fields.fields["naimenovanie"] == "Вентиль 31ч6нж, 12Х18Н10Т"
    assert fields.fields["naim_teh"] == "Вентиль запорный, материал 12Х18Н10Т"


def test_builtin_tree_yields_child_menu(catalog):
    session = start_session(catalog, "kip_disk250", 0)
    session.answer(0)  # direct menu ТСП|ТХА
    prompt = session.next_prompt()
    assert prompt.text == "Материал гильзы"
    session.answer(0)  # Сталь 20 -> child node
    prompt = session.next_prompt()
    assert prompt.text == "Длина погружения, мм"
    session.answer(1)  # Гильза 20-200
    prompt = session.next_prompt()
    assert prompt.text == "Измеряемая величина"
    session.answer(0)
    session.answer(0)
    assert session.done
    fields = session.finish()
    assert fields.fields["naimenovanie"] == "Прибор ДИСК-250, гильза Гильза 20-200"
    assert fields.fields["naim_teh"] == "Диапазон 0-200 °C"


def test_setvar_input_unit_conversion(catalog):
    fields = run_script(catalog, "ovk_duct_steel", 0, [2])
    assert fields.fields["naim_teh"] == "Воздуховод В-250 L=2 м"
    assert fields.fields["primechanie"] == "Отрезки по 2 м"
    assert fields.fields["length"] == "2"
    assert fields.numeric["length"] == 2000


def test_column_units_feed_numeric_keys(catalog):
    fields = run_script(catalog, "mt_pipe_steel", 0, [])
    assert fields.fields["pipe_outer_diameter"] == "21.3"
    assert fields.numeric["pipe_outer_diameter"] == pytest.approx(21.3)


def test_answer_out_of_range(catalog):
    session = start_session(catalog, "kip_manometers", 0)
    with pytest.raises(SessionError):
        session.answer(99)


def test_answer_non_numeric_input(catalog):
    session = start_session(catalog, "ovk_duct_steel", 0)
    with pytest.raises(SessionError):
        session.answer("не число")
    session.answer("50")
    assert session.done


def test_answer_after_done_rejected(catalog):
    session = start_session(catalog, "mt_valve_small", 0)
    with pytest.raises(SessionError):
        session.answer(0)


def test_finish_before_done_rejected(catalog):
    session = start_session(catalog, "kip_manometers", 0)
    with pytest.raises(SessionError):
        session.finish()


def test_bad_row_index(catalog):
    with pytest.raises(SessionError):
        start_session(catalog, "mt_valve_small", 99)


def test_replay_reproduces_state(catalog):
    script = [0, 1, "405"]
    a = run_script(catalog, "kip_manometers", 0, script)
    b = run_script(catalog, "kip_manometers", 0, script)
    assert a.to_json() == b.to_json()


def test_prompt_count_law(catalog):
    # prompts = direct-menu cells + prompting fragment occurrences
    # (var() reuse does not prompt; the builtin counts per tree level)
    session = start_session(catalog, "mt_valve_large", 1)
    prompts = 0
    rng = random.Random(1)
    while not session.done:
        prompt = session.next_prompt()
        prompts += 1
        if isinstance(prompt, MenuPrompt):
            session.answer(rng.randrange(len(prompt.options)))
        else:
            session.answer("1")
    # one direct-menu cell + one external menu; var(MAT) adds nothing
    assert prompts == 2


def test_random_replay_determinism(catalog):
    rng = random.Random(42)
    tables = sorted(catalog.tables)
    for _ in range(40):
        table = rng.choice(tables)
        row = rng.randrange(len(catalog.tables[table].rows))
        session = start_session(catalog, table, row)
        answers = []
        while not session.done:
            prompt = session.next_prompt()
            if isinstance(prompt, MenuPrompt):
                value = rng.randrange(len(prompt.options))
            elif prompt.kind == "number":
                value = rng.randrange(1, 100)
            else:
                value = f"s{rng.randrange(1000)}"
            answers.append(value)
            session.answer(value)
        first = session.finish().to_json()
        assert run_script(catalog, table, row, answers).to_json() == first
