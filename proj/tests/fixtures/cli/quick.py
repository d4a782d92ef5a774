# report: {"wall_ms": 5}
# echo
print(input())
