n = int(input())
names = [input().strip() for _ in range(n)]
groups = {}
for nm in names:
    groups.setdefault(nm[0], []).append(nm)
for letter in sorted(groups):
    print(letter, len(groups[letter]))
