n = int(input())
mat = [list(map(int, input().split())) for _ in range(n)]
trace = sum(mat[i][i] for i in range(n))
anti = sum(mat[i][n - 1 - i] for i in range(n))
print(abs(trace - anti))
