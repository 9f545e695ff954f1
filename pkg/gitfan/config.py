import os
import sys


class Config:
    # Computation
    WEYL_MATERIALIZE_LIMIT = 40320   # 8!, larger Weyl groups are streamed
    THREADS = 1
    BRUTE_FORCE_LIMIT = 16           # largest column count for subset oracles

    # SVG output
    SVG_WIDTH = 6.0                  # inches
    SVG_HEIGHT = 6.0
    SVG_VIEWPORT = 1.0               # rays are clipped to [-1, 1]^2
    SVG_LABEL_SIZE = 11

    # Colors (R, G, B)
    COLOR_BG = (255, 255, 255)
    COLOR_WALL = (40, 42, 50)
    COLOR_ORIGIN = (220, 80, 70)
    CHAMBER_COLORS = [
        (100, 150, 200),
        (100, 200, 100),
        (230, 140, 40),
        (150, 100, 220),
        (80, 200, 220),
        (220, 80, 70),
    ]

    THEMES = {
        "classic": {
            "bg": (255, 255, 255),
            "wall": (40, 42, 50),
            "chambers": [
                (100, 150, 200), (100, 200, 100), (230, 140, 40),
                (150, 100, 220), (80, 200, 220), (220, 80, 70),
            ],
        },
        "print": {
            "bg": (255, 255, 255),
            "wall": (0, 0, 0),
            "chambers": [(200, 200, 200), (150, 150, 150), (230, 230, 230)],
        },
        "noir": {
            "bg": (12, 14, 20),
            "wall": (240, 240, 240),
            "chambers": [(70, 70, 80), (110, 110, 120), (45, 50, 65)],
        },
    }

    @staticmethod
    def apply_theme(theme_name):
        if theme_name not in Config.THEMES:
            print(f"Warning: Unknown theme '{theme_name}'. Using default.", file=sys.stderr)
            return

        t = Config.THEMES[theme_name]
        Config.COLOR_BG = t["bg"]
        Config.COLOR_WALL = t["wall"]
        Config.CHAMBER_COLORS = list(t["chambers"])

    @staticmethod
    def set_threads(count):
        """Caps the number of worker threads used for per-chamber work."""
        Config.THREADS = max(1, int(count))

    @staticmethod
    def apply_env(environ=None):
        """
        Reads GITFAN_THREADS from the environment.
        Malformed values are ignored with a warning.
        """
        environ = os.environ if environ is None else environ
        raw = environ.get("GITFAN_THREADS")
        if raw is None:
            return
        try:
            Config.set_threads(int(raw))
        except ValueError:
            print(f"Warning: Ignoring GITFAN_THREADS='{raw}' (not an integer).", file=sys.stderr)

    @staticmethod
    def chamber_color(index):
        palette = Config.CHAMBER_COLORS or [(200, 200, 200)]
        return palette[index % len(palette)]
