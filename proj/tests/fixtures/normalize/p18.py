def matmul(x, y):
    size = len(x)
    res = [[0] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            for k in range(size):
                res[i][j] += x[i][k] * y[k][j]
    return res

m = [[1, 1], [1, 0]]
p = matmul(m, m)
print(p[0][0], p[0][1])
