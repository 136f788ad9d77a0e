h, w = 3, 4
grid = []
for r in range(h):
    row = ''
    for c in range(w):
        row += '#' if (r + c) % 2 == 0 else '.'
    grid.append(row)
print('\n'.join(grid))
