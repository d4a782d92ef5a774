from collections import Counter
s = input().strip()
cnt = Counter(s)
best = max(cnt.values())
print(sum(1 for c in cnt if cnt[c] == best))
