import json

import pytest

import cluesim


def test_roster():
    cards = cluesim.cards()
    assert len(cards) == 21
    assert cards[0] == "Miss Scarlet"
    assert cluesim.parse_card("  lead   PIPE ") == "Lead Pipe"
    with pytest.raises(cluesim.UnknownCard):
        cluesim.parse_card("Dagger")


def test_parse_response():
    move = cluesim.parse_response(
        "act", "SUMMARY: s\nREASONING: r\nSUGGESTION: Kitchen, Rope, Mrs. White\nACCUSATION: NONE"
    )
    assert move["suggestion"] == ["Mrs. White", "Rope", "Kitchen"]
    assert move["accusation"] is None
    with pytest.raises(cluesim.ParseError):
        cluesim.parse_response("show", "no labels here")


def game_config(seed=7):
    return json.dumps(
        {
            "seed": seed,
            "num_players": 4,
            "round_limit": 30,
            "starting_seat": 0,
            "deck": {"suspects": 6, "weapons": 6, "rooms": 9},
            "agents": [{"kind": "oracle"}] + [{"kind": "random"}] * 3,
        }
    )


def test_game_replays_and_reports():
    log = cluesim.play_game(game_config())
    assert log == cluesim.play_game(game_config())
    records = [json.loads(line) for line in log.splitlines()]
    assert records[0]["type"] == "header"
    assert records[-1]["type"] == "sealed"
    assert cluesim.replay(log) == len(records) - 3
    report = cluesim.build_report([log, cluesim.play_game(game_config(8))])
    assert report["summary_csv"].startswith("label,wins,mean_rank")
    assert "2 game(s), 4 players" in report["table"]
    series = cluesim.knowledge_series(log, 0)
    assert series == sorted(series) and series[-1] <= 18


def test_tampered_log_diverges():
    lines = cluesim.play_game(game_config()).splitlines()
    for i, line in enumerate(lines):
        rec = json.loads(line)
        if rec.get("kind") == "suggestion" and rec["shown_card"] is not None:
            hands = json.loads(lines[-1])["hands"][rec["disprover"]]
            rec["shown_card"] = next(c for c in hands if c != rec["shown_card"])
            lines[i] = json.dumps(rec)
            break
    with pytest.raises(cluesim.ReplayDivergence):
        cluesim.replay("\n".join(lines) + "\n")
    with pytest.raises(cluesim.CorruptLog):
        cluesim.replay("\n".join(lines))


def test_tournament():
    spec = {"tournament_id": "py", "games": 3, "seed": 1, "agents": [{"kind": "random"}] * 3}
    out = cluesim.run_tournament(json.dumps(spec), parallel=2)
    assert len(out["logs"]) == 3
    assert out["logs"] == cluesim.run_tournament(json.dumps(spec))["logs"]
    with pytest.raises(cluesim.InvalidConfig):
        cluesim.run_tournament(json.dumps({"agents": [{"kind": "llm", "model_id": "m"}]}))


def test_knowledge_base():
    kb = cluesim.KnowledgeBase(0, [6, 6, 6], ["Miss Scarlet", "Colonel Mustard", "Mrs. White", "Mr. Green", "Mrs. Peacock", "Knife"])
    facts = dict(kb.propagate().certain_facts())
    # Five suspects in hand leave Plum in the envelope.
    assert facts["Professor Plum"] == -1
    kb.add_disjunction(1, ["Rope", "Kitchen"])
    kb.exclude("Kitchen", 1)
    assert kb.propagate().candidates("Rope") == [1]
    with pytest.raises(cluesim.Inconsistent):
        kb.place("Knife", 2)
