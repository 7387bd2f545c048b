#!/usr/bin/env python3
"""Regenerates data/corpus.txt: 16 handcrafted-style 14x28 platformer segments."""
import random

H, W = 14, 28


def segment(seed):
    rng = random.Random(seed)
    g = [['-'] * W for _ in range(H)]
    for c in range(W):
        g[12][c] = g[13][c] = 'X'
    # gaps in the ground, never at the edges
    c = 4
    while c < W - 5:
        if rng.random() < 0.18:
            width = rng.randint(1, 3)
            for k in range(width):
                g[12][c + k] = g[13][c + k] = '-'
            c += width + 3
        else:
            c += 1
    # pipes
    for _ in range(rng.randint(0, 2)):
        c = rng.randint(5, W - 7)
        if g[12][c] == 'X' and g[12][c + 1] == 'X':
            h = rng.randint(2, 3)
            for r in range(12 - h, 12):
                g[r][c] = g[r][c + 1] = '|'
    # floating block rows
    for _ in range(rng.randint(1, 3)):
        r = rng.choice([7, 8])
        c = rng.randint(3, W - 6)
        for k in range(rng.randint(2, 5)):
            if g[r][c + k] == '-':
                g[r][c + k] = rng.choice('SSS?')
        if rng.random() < 0.6 and r >= 4:
            for k in range(rng.randint(1, 3)):
                if g[r - 3][c + k] == '-':
                    g[r - 3][c + k] = 'o'
    # jump-through platforms
    if rng.random() < 0.5:
        r = rng.choice([9, 10])
        c = rng.randint(6, W - 8)
        for k in range(rng.randint(3, 5)):
            if g[r][c + k] == '-':
                g[r][c + k] = '%'
    # staircase
    if rng.random() < 0.4:
        c = rng.randint(8, W - 8)
        for step in range(rng.randint(2, 4)):
            for r in range(11 - step, 12):
                if g[12][c + step] == 'X' and g[r][c + step] == '-':
                    g[r][c + step] = 'X'
    # coins on the ground line
    for _ in range(rng.randint(0, 3)):
        c = rng.randint(2, W - 3)
        if g[11][c] == '-' and g[12][c] == 'X':
            g[10][c] = 'o'
    # enemies
    for _ in range(rng.randint(0, 2)):
        c = rng.randint(6, W - 4)
        if g[11][c] == '-' and g[12][c] == 'X':
            g[11][c] = 'E'
    return '\n'.join(''.join(row) for row in g)


if __name__ == '__main__':
    with open('data/corpus.txt', 'w') as f:
        f.write('\n\n'.join(segment(s) for s in range(16)) + '\n')
