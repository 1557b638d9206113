"""State machine rules under forced shot outcomes."""
import math

import pytest

from duelsim import (
    GameSpec,
    PlayerSpec,
    apply_shot,
    is_terminal,
    local_time,
    make_curve,
    new_state,
)


def trio(bullets=(1, 1, 1)):
    return GameSpec(
        players=(
            PlayerSpec(id=1, curve=make_curve("linear", 20.0), bullets=bullets[0]),
            PlayerSpec(id=2, curve=make_curve("linear", 30.0), bullets=bullets[1]),
            PlayerSpec(id=3, curve=make_curve("linear", 40.0), bullets=bullets[2]),
        )
    )


class TestNewState:
    def test_initial_snapshot(self):
        st = new_state(trio())
        assert st.alive == st.armed == frozenset({1, 2, 3})
        assert len(st.pair_set) == 3
        assert st.clock_origin == 0.0 and st.global_time == 0.0
        assert st.shot_log == ()

    def test_zero_bullets_rejected(self):
        with pytest.raises(ValueError):
            PlayerSpec(id=1, curve=make_curve("linear", 5.0), bullets=0)

    def test_duplicate_ids_rejected(self):
        p = PlayerSpec(id=1, curve=make_curve("linear", 5.0))
        with pytest.raises(ValueError):
            GameSpec(players=(p, p))

    def test_single_player_rejected(self):
        with pytest.raises(ValueError):
            GameSpec(players=(PlayerSpec(id=1, curve=make_curve("linear", 5.0)),))


class TestApplyShot:
    def test_hit_removes_target_and_its_pairs(self):
        st = apply_shot(new_state(trio()), 1, 2, "hit", at_time=12.0)
        assert st.alive == frozenset({1, 3})
        assert st.armed == frozenset({3})
        assert 2 not in st.curves and 2 not in st.bullets
        assert [bf.pair for bf in st.pair_set] == [(1, 3)]
        # shooter spent his only bullet on the hit, so the surviving
        # pair waits for player 3's curve to saturate
        assert abs(st.pair_set.battlefields[0].time - 40.0) <= 1e-9

    def test_miss_zeroes_curve_but_keeps_player(self):
        st = apply_shot(new_state(trio()), 1, 2, "miss", at_time=12.0)
        assert st.alive == frozenset({1, 2, 3})
        assert st.armed == frozenset({2, 3})
        assert st.curves[1].kind == "zero"
        assert len(st.pair_set) == 3

    def test_multi_bullet_shooter_stays_armed(self):
        st = apply_shot(new_state(trio(bullets=(2, 1, 1))), 1, 2, "miss", at_time=5.0)
        assert 1 in st.armed
        assert st.curves[1].kind == "linear"
        assert st.bullets[1] == 1

    def test_clock_resets_on_every_shot(self):
        st = apply_shot(new_state(trio()), 1, 2, "miss", at_time=12.0)
        assert st.clock_origin == 12.0 and st.global_time == 12.0
        assert local_time(st, 15.0) == 3.0
        with pytest.raises(ValueError):
            local_time(st, 11.0)
        st2 = apply_shot(st, 2, 1, "miss", at_time=15.5)
        assert st2.clock_origin == 15.5

    def test_hit_probability_uses_local_clock(self):
        st = apply_shot(new_state(trio()), 1, 2, "miss", at_time=12.0)
        st2 = apply_shot(st, 2, 3, "miss", at_time=27.0)
        ev = st2.shot_log[-1]
        assert ev.local_time == 15.0
        assert ev.p_hit == pytest.approx(0.5, abs=1e-12)  # P_2(15) = 15/30

    def test_shot_log_accumulates(self):
        st = new_state(trio())
        st = apply_shot(st, 1, 2, "miss", at_time=3.0)
        st = apply_shot(st, 2, 1, "hit", at_time=7.0)
        assert [ev.shooter for ev in st.shot_log] == [1, 2]
        assert st.shot_log[1].outcome == "hit"

    def test_dead_pair_goes_unreachable(self):
        st = apply_shot(new_state(trio()), 1, 2, "miss", at_time=2.0)
        st = apply_shot(st, 2, 3, "miss", at_time=4.0)
        by_pair = {bf.pair: bf.time for bf in st.pair_set}
        assert by_pair[(1, 2)] == math.inf
        assert math.isfinite(by_pair[(1, 3)])

    def test_rejects_bad_actors(self):
        st = new_state(trio())
        with pytest.raises(ValueError):
            apply_shot(st, 1, 1, "miss")
        with pytest.raises(ValueError):
            apply_shot(st, 9, 1, "miss")
        with pytest.raises(ValueError):
            apply_shot(st, 1, 9, "miss")
        with pytest.raises(ValueError):
            apply_shot(st, 1, 2, "graze")
        with pytest.raises(ValueError):
            apply_shot(st, 1, 2, "miss", at_time=-1.0)
        spent = apply_shot(st, 1, 2, "miss", at_time=2.0)
        with pytest.raises(ValueError):
            apply_shot(spent, 1, 2, "miss", at_time=3.0)
        dead = apply_shot(st, 1, 2, "hit", at_time=2.0)
        with pytest.raises(ValueError):
            apply_shot(dead, 3, 2, "miss", at_time=4.0)

    def test_time_cannot_run_backwards(self):
        st = apply_shot(new_state(trio()), 1, 2, "miss", at_time=10.0)
        with pytest.raises(ValueError):
            apply_shot(st, 2, 3, "miss", at_time=9.0)


class TestTerminal:
    def test_fresh_game_not_terminal(self):
        assert is_terminal(new_state(trio())) == (False, None)

    def test_lone_survivor(self):
        st = apply_shot(new_state(trio()), 1, 2, "hit", at_time=12.0)
        st = apply_shot(st, 3, 1, "hit", at_time=20.0)
        status = is_terminal(st)
        assert status.terminal and status.reason == "lone-survivor"
        assert st.pair_set.n == 1 and len(st.pair_set) == 0

    def test_bullets_exhausted(self):
        st = new_state(trio())
        st = apply_shot(st, 1, 2, "miss", at_time=1.0)
        st = apply_shot(st, 2, 3, "miss", at_time=2.0)
        st = apply_shot(st, 3, 1, "miss", at_time=3.0)
        status = is_terminal(st)
        assert status.terminal and status.reason == "bullets-exhausted"
        assert all(bf.time == math.inf for bf in st.pair_set)

    def test_lone_survivor_outranks_exhaustion(self):
        spec = GameSpec(
            players=(
                PlayerSpec(id=1, curve=make_curve("linear", 5.0)),
                PlayerSpec(id=2, curve=make_curve("linear", 6.0)),
            )
        )
        st = apply_shot(new_state(spec), 1, 2, "hit", at_time=3.0)
        assert is_terminal(st).reason == "lone-survivor"
