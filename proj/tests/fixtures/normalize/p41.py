s = input()
runs = []
prev = None
for ch in s:
    if ch == prev:
        runs[-1][1] += 1
    else:
        runs.append([ch, 1])
    prev = ch
print("".join(f"{c}{k}" for c, k in runs))
