"""The whole pipeline over HTTP: upload, statistics, and server-side play.

Uses the in-process test client so the demo needs no running port; the
routes are exactly the ones `gecka serve` exposes (docs/api.md).
"""

import tempfile

from fastapi.testclient import TestClient

from gecka.dungeon import DungeonParams, generate_dungeon
from gecka.scene import scene_to_doc
from gecka.server import create_app

TABLE_XML = open("fixtures/table1-session.xml", "rb").read()

with tempfile.TemporaryDirectory() as data_dir:
    client = TestClient(create_app(data_dir))

    # 1. a designer uploads their session
    response = client.post("/api/sessions", content=TABLE_XML,
                           headers={"content-type": "application/xml"})
    print(f"POST /api/sessions -> {response.status_code} {response.json()}")

    # uploading the same session again is a no-op
    again = client.post("/api/sessions", content=TABLE_XML,
                        headers={"content-type": "application/xml"})
    print(f"POST /api/sessions (again) -> {again.status_code}")

    # 2. the pilot's most common rules
    print("\nGET /api/stats/poags?limit=5")
    for row in client.get("/api/stats/poags", params={"limit": 5}).json():
        goal = row["goal"] or "--"
        print(f"  {row['item']:<14} {row['action']:<6} {row['prerequisites']:<28} "
              f"{row['outcome']:<14} {goal}")

    # 3. a sample of the mined commonsense
    rows = client.get("/api/assertions").json()
    print(f"\n{len(rows)} assertions extracted; e.g.:")
    for row in rows[:3]:
        print(f"  {row['relation']}({', '.join(row['arguments'])})")
        print(f"    \"{row['sentence']}\"")

    # 4. play a seeded dungeon through the API
    dungeon = generate_dungeon(DungeonParams(seed=7, zombie_count=2))
    client.put(f"/api/scenes/{dungeon.id}", json=scene_to_doc(dungeon))
    game = client.post("/api/games", json={"scene": dungeon.id, "seed": 3}).json()
    print(f"\ncreated game {game['id']} on {dungeon.id}")
    view = game["state"]
    for cmd in [{"kind": "move-to", "x": 16, "y": 16}] * 5:
        view = client.post(f"/api/games/{game['id']}/step",
                           json={"command": cmd}).json()["state"]
    revealed = sum(ch != "?" for row in view["tiles"] for ch in row)
    print(f"after 5 turns: position {view['position']}, "
          f"{revealed}/{view['width'] * view['height']} tiles revealed")
    print("masked map around the character:")
    for row in view["tiles"][max(0, view["position"][1] - 4):view["position"][1] + 5]:
        print(" ", row)
